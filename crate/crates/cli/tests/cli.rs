use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use subgrowth::presentation::parse_presentation_file;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(name: &str) -> String {
    root().join("corpus").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subgrowth")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validate(doc: &Value) {
    let name = doc["schema"].as_str().expect("schema tag");
    let text = std::fs::read_to_string(root().join("schemas").join(format!("{name}.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name} output fails its schema:\n{}", msgs.join("\n"));
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pres"))
        .collect();
    files.sort();
    files
}

#[test]
fn corpus_round_trips() {
    let files = corpus_files();
    assert!(files.len() >= 12);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        let first = parse_presentation_file(&text).unwrap().presentation;
        let again = parse_presentation_file(&first.to_text()).unwrap().presentation;
        assert_eq!(first, again, "{}", f.display());
    }
}

#[test]
fn analyze_examples() {
    for (file, b1, b2, def) in [("worked.pres", 2, 1, 1), ("f3.pres", 3, 0, 3), ("genus2.pres", 4, 1, 3)] {
        let v = json(&["analyze", &corpus(file)]);
        validate(&v);
        assert_eq!((v["b1"].as_u64(), v["b2"].as_u64(), v["deficiency"].as_i64()), (Some(b1), Some(b2), Some(def)), "{file}");
    }
}

#[test]
fn verify_examples() {
    let v = json(&["verify", &corpus("genus2.pres")]);
    validate(&v);
    let q = &v["quotients"][0];
    assert_eq!(q["cover_b1"], 34);
    let bounds: Vec<&str> = q["bounds"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
    assert_eq!(bounds, ["0", "9", "25", "34", "34"]);
    assert_eq!(v["violations"], 0);

    let v = json(&["verify", &corpus("f3.pres")]);
    assert_eq!(v["quotients"][0]["cover_b1"], 17);
    assert_eq!(v["quotients"][0]["bounds"][3], "17");

    let v = json(&["verify", &corpus("z.pres")]);
    assert_eq!(v["quotients"][0]["cover_b1"], 1);
    assert_eq!(v["quotients"][0]["bounds"], serde_json::json!(["0", "1"]));

    let v = json(&["verify", "--sweep", &corpus("z2.pres")]);
    validate(&v);
    // three index-2 kernels and the full quotient
    assert_eq!(v["quotients"].as_array().unwrap().len(), 4);
}

#[test]
fn every_command_matches_its_schema() {
    let wit = corpus("worked.wit");
    let docs = [
        json(&["cover", &corpus("worked.pres")]),
        json(&["cochains", &corpus("worked.pres"), "--witnesses", &wit]),
        json(&["cochains", &corpus("genus2.pres"), "--level", "2"]),
        json(&["bound", "--b1", "4", "--b2", "1", "--n", "4"]),
        json(&["bound", "--b1", "5", "--b2", "2", "--n", "3", "--p", "3", "--level", "1"]),
        json(&["series", &corpus("f2.pres"), "--steps", "3"]),
        json(&["census", &corpus("f2.pres"), "--max-index", "4"]),
        json(&["census", &corpus("z.pres"), "--max-index", "8", "--series-steps", "0"]),
        json(&["asymptote", "--mode", "subgroup-floor", "--n", "65536"]),
        json(&["asymptote", "--mode", "homology-ratio", "--n", "65536"]),
        json(&["asymptote", "--mode", "subnormal-ceiling", "--n", "1024"]),
        json(&["asymptote", "--mode", "subgroup-ceiling", "--n", "1024", "--k", "4"]),
        json(&["asymptote", "--mode", "subnormal-floor", "--b1", "4"]),
        json(&["asymptote", "--mode", "recurrence", "--x1", "20"]),
        json(&["asymptote", "--mode", "b2b1", "--b1", "10"]),
        json(&["asymptote", "--mode", "stirling"]),
    ];
    for d in &docs {
        validate(d);
    }
    let cover = &docs[0];
    assert_eq!(cover["faces"], 8);
    assert_eq!(cover["schreier"]["agrees"], true);
    for level in docs[1]["levels"].as_array().unwrap() {
        assert_eq!(level["cocycle_check"], "pass");
        assert_eq!(level["unitriangular"], true);
    }
}

#[test]
fn csv_outputs() {
    let out = run(&["bound", "--b1", "4", "--b2", "1", "--n", "4", "--p", "2", "--sweep", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "level,bound,test_loops,constraints");
    assert_eq!(lines[4], "3,34,45,11");

    let out = run(&["series", &corpus("f2.pres"), "--p", "2", "--steps", "3", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let b1: Vec<String> = rdr.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert_eq!(b1, ["2", "5", "129"]);

    let out = run(&["asymptote", "--mode", "subgroup-floor", "--n", "65536", "--format", "csv"]);
    let text = stdout(&out);
    let value = text.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    let expected = num_bigint::BigUint::from(1u32) << 4096u32;
    assert_eq!(value, expected.to_string());
}

#[test]
fn text_output() {
    let out = run(&["analyze", &corpus("genus2.pres"), "--format", "text"]);
    let text = stdout(&out);
    assert!(text.starts_with("b1: 4\nb2: 1\n"), "{text}");
}

#[test]
fn emit_presentation() {
    let dir = std::env::temp_dir().join(format!("subgrowth-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kernel.pres");
    let out = run(&["cover", &corpus("genus2.pres"), "--emit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["analyze", path.to_str().unwrap()]);
    assert_eq!(v["b1"], 34);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["analyze", "/nonexistent/file.pres"]), Some(2));

    let dir = std::env::temp_dir().join(format!("subgrowth-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pres");
    std::fs::write(&bad, "gens: a b\nrels: a*c\n").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: 2:"));
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(code(&["analyze", &corpus("f2.pres"), "--p", "4"]), Some(2));
    assert_eq!(code(&["analyze", &corpus("f2.pres"), "--budget", "0"]), Some(2));
    assert_eq!(code(&["bound", "--b1", "2", "--b2", "0", "--n", "3"]), Some(2));
    assert_eq!(code(&["cover", &corpus("f2.pres"), "--epi", "1 0; 0"]), Some(2));
    assert_eq!(code(&["cochains", &corpus("worked.pres")]), Some(2));
    assert_eq!(code(&["asymptote", "--mode", "recurrence", "--lambda", "1/0"]), Some(2));
    assert_eq!(code(&["cover", &corpus("genus2.pres"), "--budget", "50"]), Some(3));
    assert_eq!(code(&["verify", &corpus("f4.pres"), "--budget", "50"]), Some(3));
    assert_eq!(code(&["series", &corpus("f2.pres"), "--steps", "2"]), Some(0));
}
