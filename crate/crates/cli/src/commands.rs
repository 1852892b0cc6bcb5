use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};
use subgrowth::bounds::{self, BoundSpec, GrowthMode};
use subgrowth::census::{self, DEFAULT_INDEX_LIMIT};
use subgrowth::cochain::{is_lower_unitriangular, CochainLab};
use subgrowth::cover::{
    build_cover, cover_betti, enumerate_quotients, full_mod_p_epi, reidemeister_schreier, required_cells, CoverComplex,
    Epimorphism,
};
use subgrowth::presentation::{
    normalize_witnessed, parse_epi_spec, parse_presentation_file, parse_witnesses, EpiSpec, Presentation,
};
use subgrowth::series::{self, run_series};
use subgrowth::{Error, Prime, Word};

use crate::output::{Report, Table};

/// Failures that end a command, with the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Core(Error::Invariant(_)) => 4,
            CliError::Core(_) | CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<subgrowth::ParseError> for CliError {
    fn from(e: subgrowth::ParseError) -> Self {
        CliError::Core(Error::Parse(e))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Options shared by every command.
pub struct Context {
    pub p: Prime,
    pub budget: u64,
    pub epi: Option<String>,
    pub witnesses: Option<String>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

struct Loaded {
    pres: Presentation,
    epi_spec: EpiSpec,
}

fn load(ctx: &Context, path: &Path) -> CliResult<Loaded> {
    let file = parse_presentation_file(&read(path)?)?;
    let epi_spec = match &ctx.epi {
        Some(text) => parse_epi_spec(text)?,
        None => file.epi.unwrap_or(EpiSpec::Full),
    };
    Ok(Loaded { pres: file.presentation, epi_spec })
}

fn witnesses(ctx: &Context, pres: &Presentation) -> CliResult<Vec<(usize, Word)>> {
    match &ctx.witnesses {
        Some(path) => Ok(parse_witnesses(&read(Path::new(path))?, pres.generators())?),
        None => Ok(Vec::new()),
    }
}

fn s(x: impl ToString) -> String {
    x.to_string()
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn analyze(ctx: &Context, path: &Path) -> CliResult<Report> {
    let Loaded { pres, .. } = load(ctx, path)?;
    let r = pres.betti_conditions(ctx.p);
    let json = json!({
        "schema": "analyze.v1",
        "p": ctx.p.get(),
        "generators": pres.gen_count(),
        "relators": pres.relator_count(),
        "b1": r.b1,
        "b2": r.b2,
        "deficiency": r.deficiency,
        "conditions": {
            "b2_minus_b1": r.b2_minus_b1,
            "b2_over_b1_plus_1": r.b2_over_b1_plus_1,
            "b2_le_b1": r.b2_le_b1,
            "b2_minus_b1_le_minus_1": r.b2_minus_b1_le_minus_1,
            "b2_le_2b1_minus_2": r.b2_le_2b1_minus_2,
        },
    });
    let mut t = Table::new(&["p", "generators", "relators", "b1", "b2", "deficiency", "b2_minus_b1", "b2_le_b1", "b2_le_2b1_minus_2"]);
    t.push(vec![
        s(ctx.p),
        s(pres.gen_count()),
        s(pres.relator_count()),
        s(r.b1),
        s(r.b2),
        s(r.deficiency),
        s(r.b2_minus_b1),
        s(r.b2_le_b1),
        s(r.b2_le_2b1_minus_2),
    ]);
    Ok(Report::new(json, t)
        .fact("b1", r.b1)
        .fact("b2", r.b2)
        .fact("deficiency", r.deficiency)
        .fact("b2/(b1+1)", &r.b2_over_b1_plus_1))
}

fn epimorphism(ctx: &Context, loaded: &Loaded) -> CliResult<Epimorphism> {
    Ok(Epimorphism::from_spec(&loaded.pres, ctx.p, &loaded.epi_spec)?)
}

fn images_json(epi: &Epimorphism) -> Value {
    json!(epi.images())
}

pub fn verify(ctx: &Context, path: &Path, sweep: bool) -> CliResult<Report> {
    let loaded = load(ctx, path)?;
    let pres = &loaded.pres;
    let betti = pres.complex_betti(ctx.p);
    let epis = if sweep {
        let full = full_mod_p_epi(pres, ctx.p)?;
        let budget = BigUint::from(ctx.budget);
        enumerate_quotients(pres, &full, |k| required_cells(pres, ctx.p, k) <= budget)?
    } else {
        vec![epimorphism(ctx, &loaded)?]
    };
    let mut t = Table::new(&["quotient", "n", "level", "bound", "cover_b1", "holds"]);
    let mut quotients = Vec::new();
    let mut total = 0;
    for (q, epi) in epis.iter().enumerate() {
        let cover = build_cover(pres, epi, ctx.budget)?;
        let cb = cover_betti(&cover)?;
        let n = epi.n() as u64;
        let sweep = bounds::level_sweep(betti.b1 as u64, betti.b2 as u64, n, ctx.p)?;
        let actual = BigInt::from(cb.b1);
        let mut violations = 0;
        for (l, b) in sweep.iter().enumerate() {
            let holds = &actual >= b;
            violations += usize::from(!holds);
            t.push(vec![s(q), s(n), s(l), s(b), s(cb.b1), s(holds)]);
        }
        total += violations;
        quotients.push(json!({
            "n": n,
            "images": images_json(epi),
            "cover_b1": cb.b1,
            "cover_b2": cb.b2,
            "bounds": strings(&sweep),
            "violations": violations,
        }));
    }
    let json = json!({
        "schema": "verify.v1",
        "p": ctx.p.get(),
        "b1": betti.b1,
        "b2": betti.b2,
        "quotients": quotients,
        "violations": total,
    });
    let mut r = Report::new(json, t)
        .fact("b1", betti.b1)
        .fact("b2", betti.b2)
        .fact("quotients", epis.len())
        .fact("violations", total);
    r.violations = total;
    Ok(r)
}

pub fn cover(ctx: &Context, path: &Path, emit: Option<&Path>) -> CliResult<Report> {
    let loaded = load(ctx, path)?;
    let epi = epimorphism(ctx, &loaded)?;
    let cover = build_cover(&loaded.pres, &epi, ctx.budget)?;
    let cb = cover_betti(&cover)?;
    let rs = reidemeister_schreier(&cover)?;
    let sb = rs.presentation.complex_betti(ctx.p);
    let agree = sb.b1 == cb.b1 && sb.b2 + rs.trivial_faces == cb.b2;
    if let Some(out) = emit {
        fs::write(out, rs.presentation.to_text())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    }
    let json = json!({
        "schema": "cover.v1",
        "p": ctx.p.get(),
        "n": epi.n(),
        "images": images_json(&epi),
        "vertices": cover.vertex_count(),
        "edges": cover.edge_count(),
        "faces": cover.face_count(),
        "b0": cb.b0,
        "b1": cb.b1,
        "b2": cb.b2,
        "schreier": {
            "generators": rs.presentation.gen_count(),
            "relators": rs.presentation.relator_count(),
            "trivial_faces": rs.trivial_faces,
            "b1": sb.b1,
            "b2": sb.b2,
            "agrees": agree,
        },
    });
    let mut t = Table::new(&["n", "vertices", "edges", "faces", "b0", "b1", "b2", "schreier_generators", "schreier_relators", "agrees"]);
    t.push(vec![
        s(epi.n()),
        s(cover.vertex_count()),
        s(cover.edge_count()),
        s(cover.face_count()),
        s(cb.b0),
        s(cb.b1),
        s(cb.b2),
        s(rs.presentation.gen_count()),
        s(rs.presentation.relator_count()),
        s(agree),
    ]);
    let mut r = Report::new(json, t);
    r.violations = usize::from(!agree);
    Ok(r)
}

fn cochain_setup(ctx: &Context, path: &Path) -> CliResult<(Presentation, CoverComplex, subgrowth::presentation::NormalizedPresentation)> {
    let loaded = load(ctx, path)?;
    let epi = epimorphism(ctx, &loaded)?;
    let wit = witnesses(ctx, &loaded.pres)?;
    let cover = build_cover(&loaded.pres, &epi, ctx.budget)?;
    let norm = normalize_witnessed(&loaded.pres, &epi, None, &wit)?;
    Ok((loaded.pres, cover, norm))
}

pub fn cochains(ctx: &Context, path: &Path, level: Option<usize>) -> CliResult<Report> {
    let (pres, cover, norm) = cochain_setup(ctx, path)?;
    let lab = CochainLab::new(&cover, &norm)?;
    let betti = pres.complex_betti(ctx.p);
    let levels: Vec<usize> = match level {
        Some(l) => vec![l],
        None => (0..=lab.n()).collect(),
    };
    let mut t = Table::new(&[
        "level",
        "dim_u",
        "constraints",
        "dim_kernel",
        "dim_quotient",
        "quotient_floor",
        "test_loops",
        "pairing_rank",
        "unitriangular",
        "cocycle_check",
    ]);
    let mut records = Vec::new();
    let mut violations = 0;
    for l in levels {
        let r = lab.dimension_report(l, betti.b1 as u64, betti.b2 as u64)?;
        let loops = lab.test_loops(l)?;
        let unitri = is_lower_unitriangular(&lab.pairing_matrix(&loops));
        let check = if r.cocycles.passed() { "pass" } else { "fail" };
        violations += r.cocycles.violations.len() + usize::from(!r.meets_floor()) + usize::from(!unitri);
        t.push(vec![
            s(l),
            s(r.dim_u),
            s(r.constraints),
            s(r.dim_kernel),
            s(r.dim_quotient),
            s(&r.quotient_floor),
            s(r.test_loops),
            s(r.pairing_rank),
            s(unitri),
            s(check),
        ]);
        records.push(json!({
            "level": l,
            "dim_u": r.dim_u,
            "constraints": r.constraints,
            "dim_kernel": r.dim_kernel,
            "dim_quotient": r.dim_quotient,
            "dim_u_quotient": r.dim_u_quotient,
            "quotient_floor": s(&r.quotient_floor),
            "test_loops": r.test_loops,
            "pairing_rank": r.pairing_rank,
            "unitriangular": unitri,
            "cocycle_check": check,
            "cocycle_violations": r.cocycles.violations,
        }));
    }
    let part = norm.partition();
    let names = |ix: &[usize]| ix.iter().map(|&g| pres.generators()[g].clone()).collect::<Vec<_>>();
    let json = json!({
        "schema": "cochains.v1",
        "p": ctx.p.get(),
        "n": lab.n(),
        "b1": betti.b1,
        "b2": betti.b2,
        "partition": { "x1": names(&part.x1), "x2": names(&part.x2), "x3": names(&part.x3), "r1": part.r1, "r3": part.r3 },
        "levels": records,
    });
    let mut r = Report::new(json, t).fact("n", lab.n()).fact("b1", betti.b1).fact("b2", betti.b2);
    r.violations = violations;
    Ok(r)
}

pub fn bound(ctx: &Context, b1: u64, b2: u64, n: u64, level: Option<u64>) -> CliResult<Report> {
    let levels: Vec<u64> = match level {
        Some(l) => vec![l],
        None => (0..=n).collect(),
    };
    let mut t = Table::new(&["level", "bound", "test_loops", "constraints"]);
    let mut rows = Vec::new();
    for l in levels {
        let spec = BoundSpec::new(b1, b2, n, l, ctx.p)?;
        let v = bounds::homology_lower_bound(&spec);
        let loops = bounds::test_loop_count(b1, n, l, ctx.p);
        let cons = bounds::constraint_count(b2, n, l);
        t.push(vec![s(l), s(&v), s(&loops), s(&cons)]);
        rows.push(json!({ "level": l, "bound": s(&v), "test_loops": s(&loops), "constraints": s(&cons) }));
    }
    BoundSpec::new(b1, b2, n, 0, ctx.p)?;
    let (best_l, best) = bounds::best_level(b1, b2, n, ctx.p)?;
    let mut json = json!({
        "schema": "bound.v1",
        "p": ctx.p.get(),
        "b1": b1,
        "b2": b2,
        "n": n,
        "rows": rows,
        "best_level": best_l,
        "best_bound": s(&best),
    });
    let mut r_facts = vec![("best_level".to_string(), s(best_l)), ("best_bound".to_string(), s(&best))];
    if ctx.p.get() == 2 && n == b1 && b2 <= b1 {
        let (lhs, rhs) = bounds::gamma2_identity(b1, b2)?;
        json["gamma2_identity"] = json!({ "level_one": s(&lhs), "closed_form": s(&rhs), "equal": lhs == rhs });
        r_facts.push(("gamma2_identity".into(), format!("{lhs} = {rhs}")));
    }
    let mut r = Report::new(json, t);
    r.summary = r_facts;
    Ok(r)
}

fn ratio_json(row: &series::RatioRow) -> Value {
    json!({
        "i": row.i,
        "index": s(&row.index),
        "b1": s(&row.b1),
        "ratio": row.ratio.as_ref().map(|q| json!({ "lo": s(&q.lo), "hi": s(&q.hi) })),
    })
}

pub fn series_cmd(ctx: &Context, path: &Path, steps: usize) -> CliResult<Report> {
    let Loaded { pres, .. } = load(ctx, path)?;
    let trace = run_series(&pres, ctx.p, steps, ctx.budget)?;
    let opt = |x: &Option<BigInt>| x.as_ref().map(s).unwrap_or_default();
    let mut t = Table::new(&["step", "index", "b1", "b2_complex", "predicted_floor", "level_star", "generators", "relators", "bound_holds"]);
    let mut rows = Vec::new();
    for st in &trace.steps {
        t.push(vec![
            s(st.i),
            s(&st.index),
            s(st.b1),
            s(st.b2_complex),
            opt(&st.predicted_floor),
            st.level_star.map(s).unwrap_or_default(),
            s(st.generators),
            s(st.relators),
            st.bound_holds.map(s).unwrap_or_default(),
        ]);
        rows.push(json!({
            "step": st.i,
            "index": s(&st.index),
            "b1": st.b1,
            "b2_complex": st.b2_complex,
            "predicted_floor": st.predicted_floor.as_ref().map(s),
            "level_star": st.level_star,
            "generators": st.generators,
            "relators": st.relators,
            "bound_holds": st.bound_holds,
        }));
    }
    let ratios = series::homology_ratio_rows(&series::trace_rows(&trace))?;
    let json = json!({
        "schema": "series.v1",
        "p": ctx.p.get(),
        "steps": rows,
        "stopped": trace.stopped,
        "ratios": ratios.iter().map(ratio_json).collect::<Vec<_>>(),
    });
    let mut r = Report::new(json, t);
    if let Some(why) = &trace.stopped {
        r = r.fact("stopped", why);
    }
    r.violations = usize::from(!trace.bounds_hold());
    Ok(r)
}

pub fn census_cmd(ctx: &Context, path: &Path, max_index: usize, series_steps: usize, k: Option<u64>) -> CliResult<Report> {
    let Loaded { pres, .. } = load(ctx, path)?;
    let census = census::low_index(&pres, max_index, DEFAULT_INDEX_LIMIT)?;
    let floors = if series_steps == 0 || pres.complex_betti(ctx.p).b1 == 0 {
        Vec::new()
    } else {
        census::subnormal_floor_census(&run_series(&pres, ctx.p, series_steps, ctx.budget)?)
    };
    let k = k.unwrap_or(1u64 << pres.gen_count().min(63));
    let rows = census::compare_with_floor(&census, &floors, k)?;
    let mut t = Table::new(&["n", "s_n", "floor", "ceiling", "a_n", "consistent"]);
    let mut json_rows = Vec::new();
    let mut violations = 0;
    for (row, a) in rows.iter().zip(&census.exact) {
        violations += usize::from(!row.consistent);
        t.push(vec![s(row.n), s(&row.s_n), s(&row.floor), s(&row.ceiling), s(a), s(row.consistent)]);
        json_rows.push(json!({
            "n": row.n,
            "s_n": s(&row.s_n),
            "a_n": s(a),
            "floor": s(&row.floor),
            "ceiling": s(&row.ceiling),
            "consistent": row.consistent,
        }));
    }
    let json_floors: Vec<Value> = floors
        .iter()
        .map(|f| {
            json!({
                "i": f.i,
                "index": s(&f.index),
                "b1": f.b1,
                "n": s(&f.n),
                "power": s(&f.power),
                "index_p_floor": s(&f.index_p_floor),
                "subspace_n": s(&f.subspace_n),
                "subspace_floor": s(&f.subspace_floor),
            })
        })
        .collect();
    let json = json!({
        "schema": "census.v1",
        "p": ctx.p.get(),
        "max_index": max_index,
        "k": k,
        "rows": json_rows,
        "floors": json_floors,
    });
    let mut r = Report::new(json, t);
    r.violations = violations;
    Ok(r)
}

/// Parameters of the `asymptote` command; unused ones are ignored per mode.
pub struct AsymptoteArgs {
    pub mode: AsymptoteMode,
    pub n: Option<String>,
    pub k: u64,
    pub x1: u64,
    pub cap: i64,
    pub steps: usize,
    pub lambda: String,
    pub b1: u64,
    pub m: u64,
    pub x: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum AsymptoteMode {
    SubgroupFloor,
    HomologyRatio,
    SubnormalCeiling,
    SubgroupCeiling,
    SubnormalFloor,
    Recurrence,
    B2b1,
    Stirling,
}

fn parse_ratio(text: &str) -> CliResult<num_rational::Ratio<u64>> {
    let bad = || CliError::Input(format!("expected a fraction a/b, got `{text}`"));
    let (a, b) = text.split_once('/').unwrap_or((text, "1"));
    let (a, b) = (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?);
    if b == 0 {
        return Err(bad());
    }
    Ok(num_rational::Ratio::new(a, b))
}

fn mode_name(mode: AsymptoteMode) -> &'static str {
    match mode {
        AsymptoteMode::SubgroupFloor => "subgroup-floor",
        AsymptoteMode::HomologyRatio => "homology-ratio",
        AsymptoteMode::SubnormalCeiling => "subnormal-ceiling",
        AsymptoteMode::SubgroupCeiling => "subgroup-ceiling",
        AsymptoteMode::SubnormalFloor => "subnormal-floor",
        AsymptoteMode::Recurrence => "recurrence",
        AsymptoteMode::B2b1 => "b2b1",
        AsymptoteMode::Stirling => "stirling",
    }
}

pub fn asymptote(ctx: &Context, a: &AsymptoteArgs) -> CliResult<Report> {
    let name = mode_name(a.mode);
    let mut json = json!({ "schema": "asymptote.v1", "mode": name });
    let report = match a.mode {
        AsymptoteMode::SubgroupFloor | AsymptoteMode::HomologyRatio | AsymptoteMode::SubnormalCeiling | AsymptoteMode::SubgroupCeiling => {
            let n_text = a.n.as_deref().ok_or_else(|| CliError::Input(format!("mode {name} needs --n")))?;
            let n = BigUint::from_str(n_text).map_err(|_| CliError::Input(format!("--n must be a non-negative integer, got `{n_text}`")))?;
            let mode = match a.mode {
                AsymptoteMode::SubgroupFloor => GrowthMode::SubgroupFloor,
                AsymptoteMode::HomologyRatio => GrowthMode::HomologyRatio,
                AsymptoteMode::SubnormalCeiling => GrowthMode::SubnormalCeiling,
                _ => GrowthMode::SubgroupCeiling,
            };
            let g = bounds::growth_value(mode, &n, a.k)?;
            json["n"] = json!(s(&n));
            json["base"] = json!(g.base);
            json["quantity"] = json!({ "lo": s(&g.quantity.lo), "hi": s(&g.quantity.hi), "exact": g.quantity.is_exact() });
            json["value"] = json!(g.value.as_ref().map(s));
            let mut t = Table::new(&["mode", "n", "base", "quantity_lo", "quantity_hi", "value"]);
            t.push(vec![
                s(name),
                s(&n),
                g.base.map(s).unwrap_or_default(),
                s(&g.quantity.lo),
                s(&g.quantity.hi),
                g.value.as_ref().map(s).unwrap_or_default(),
            ]);
            Report::new(Value::Null, t)
        }
        AsymptoteMode::SubnormalFloor => {
            let f = bounds::subnormal_floor(a.b1 as u32, ctx.p);
            json["b1"] = json!(a.b1);
            json["p"] = json!(ctx.p.get());
            json["power"] = json!(s(&f.power));
            json["index_p_count"] = json!(s(&f.index_p_count));
            json["subspace_count"] = json!(s(&f.subspace_count));
            let mut t = Table::new(&["b1", "p", "power", "index_p_count", "subspace_count"]);
            t.push(vec![s(a.b1), s(ctx.p), s(&f.power), s(&f.index_p_count), s(&f.subspace_count)]);
            Report::new(Value::Null, t)
        }
        AsymptoteMode::Recurrence => {
            let lambda = parse_ratio(&a.lambda)?;
            let states = bounds::derived2_recurrence(a.x1, a.cap, a.steps);
            let checks = bounds::check_claims(&states, &lambda);
            let opt = |b: Option<bool>| b.map(s).unwrap_or_default();
            let mut t = Table::new(&["i", "x", "sigma", "next_term", "sigma_power", "index_ratio"]);
            let mut rows = Vec::new();
            for (st, c) in states.iter().zip(&checks) {
                t.push(vec![s(st.i), s(&st.x), s(&st.sigma), opt(c.next_term), opt(c.sigma_power), opt(c.index_ratio)]);
                rows.push(json!({
                    "i": st.i,
                    "x": s(&st.x),
                    "sigma": s(&st.sigma),
                    "next_term": c.next_term,
                    "sigma_power": c.sigma_power,
                    "index_ratio": c.index_ratio,
                }));
            }
            let ratio_rows = series::homology_ratio_rows(&series::recurrence_rows(&states, 1 << 20))?;
            json["x1"] = json!(a.x1);
            json["cap"] = json!(a.cap);
            json["lambda"] = json!(a.lambda);
            json["rows"] = json!(rows);
            json["ratios"] = json!(ratio_rows.iter().map(ratio_json).collect::<Vec<_>>());
            Report::new(Value::Null, t)
        }
        AsymptoteMode::B2b1 => {
            let steps = bounds::b2b1_iteration(a.b1, a.m, ctx.p, a.steps)?;
            let mut t = Table::new(&["i", "b1", "floor"]);
            let mut rows = Vec::new();
            for st in &steps {
                let floor = st.floor.as_ref().map(s).unwrap_or_default();
                t.push(vec![s(st.i), s(&st.b1), floor.clone()]);
                rows.push(json!({ "i": st.i, "b1": s(&st.b1), "floor": st.floor.as_ref().map(s) }));
            }
            json["p"] = json!(ctx.p.get());
            json["m"] = json!(a.m);
            json["rows"] = json!(rows);
            Report::new(Value::Null, t)
        }
        AsymptoteMode::Stirling => {
            let lambda = parse_ratio(&a.lambda)?;
            let xs = if a.x.is_empty() { vec![1 << 10, 1 << 12] } else { a.x.clone() };
            let mut t = Table::new(&["x", "holds"]);
            let mut rows = Vec::new();
            for &x in &xs {
                let holds = bounds::stirling_holds(x, &lambda);
                t.push(vec![s(x), s(holds)]);
                rows.push(json!({ "x": x, "holds": holds }));
            }
            json["lambda"] = json!(a.lambda);
            json["rows"] = json!(rows);
            Report::new(Value::Null, t)
        }
    };
    Ok(Report { json, ..report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::Input("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::NotPrime(4)).exit_code(), 2);
        assert_eq!(CliError::Core(Error::BudgetExceeded { required: "9".into(), allowed: 1 }).exit_code(), 3);
        assert_eq!(CliError::Core(Error::Invariant("x".into())).exit_code(), 4);
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_ratio("79/100").unwrap(), num_rational::Ratio::new(79, 100));
        assert_eq!(parse_ratio("3").unwrap(), num_rational::Ratio::from_integer(3));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/b").is_err());
    }
}
