//! Finite presentations `⟨X | R⟩`, their text format, and the mod-p Betti
//! numbers of the presentation 2-complex.
//!
//! ```text
//! # comment
//! gens: a b c
//! rels: [a,b]*c^-1, a^2*b^2
//! epi: full            # optional: `full`, or rows `1 0; 0 1; 0 0`
//! ```

mod normalize;

pub use normalize::{normalize_witnessed, NormalizedPresentation, Partition};

use std::collections::HashSet;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::linalg::{FpMatrix, Prime};
use crate::syntax::{describe, tokenize, Cursor, Tok, Token, WordParser};
use crate::word::{self, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

/// How the epimorphism onto `(Z/p)^n` is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpiSpec {
    /// Projection onto the full mod-p abelianization.
    Full,
    /// One row per generator, one column per coordinate.
    Matrix(Vec<Vec<i64>>),
}

/// A parsed presentation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub epi: Option<EpiSpec>,
}

/// Betti numbers of a 2-complex over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexBetti {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub p: Prime,
}

/// The b₂/b₁ inequalities evaluated on the presentation complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiConditions {
    pub b1: usize,
    pub b2: usize,
    pub deficiency: i64,
    pub b2_minus_b1: i64,
    /// `b2 / (b1 + 1)` in lowest terms.
    pub b2_over_b1_plus_1: String,
    /// `b2 ≤ b1`
    pub b2_le_b1: bool,
    /// `b2 − b1 ≤ −1`
    pub b2_minus_b1_le_minus_1: bool,
    /// `b2 ≤ 2 b1 − 2`
    pub b2_le_2b1_minus_2: bool,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Validates names and relators; relators are freely reduced.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in &generators {
            if !valid_name(name) {
                return Err(Error::Invariant(format!("invalid generator name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Invariant(format!("generator `{name}` declared twice")));
            }
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            let r = word::reduce(r.letters().iter().copied());
            if r.is_identity() {
                return Err(Error::Invariant(format!("relator {i} is the empty word")));
            }
            if r.max_generator().is_some_and(|g| g >= generators.len()) {
                return Err(Error::Invariant(format!("relator {i} uses an undeclared generator")));
            }
            reduced.push(r);
        }
        Ok(Presentation { generators, relators: reduced })
    }

    /// The free group on `a, b, c, ...` (or `x1, x2, ...` past 26).
    pub fn free(rank: usize) -> Self {
        let generators = (0..rank)
            .map(|i| if rank <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{}", i + 1) })
            .collect();
        Presentation { generators, relators: Vec::new() }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// `|X| − |R|` for this presentation.
    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    /// ∂₂ of the presentation complex: column `j` is the exponent vector of relator `j` mod p.
    pub fn exponent_matrix(&self, p: Prime) -> FpMatrix {
        let columns: Vec<Vec<u32>> =
            self.relators.iter().map(|r| r.exponent_vector(self.gen_count(), p.get())).collect();
        FpMatrix::from_columns(p, self.gen_count(), &columns)
    }

    pub fn complex_betti(&self, p: Prime) -> ComplexBetti {
        let rank = self.exponent_matrix(p).rank();
        ComplexBetti { b0: 1, b1: self.gen_count() - rank, b2: self.relator_count() - rank, p }
    }

    pub fn betti_conditions(&self, p: Prime) -> BettiConditions {
        let ComplexBetti { b1, b2, .. } = self.complex_betti(p);
        let diff = b2 as i64 - b1 as i64;
        let ratio = Ratio::new(b2 as u64, b1 as u64 + 1);
        BettiConditions {
            b1,
            b2,
            deficiency: self.deficiency(),
            b2_minus_b1: diff,
            b2_over_b1_plus_1: format!("{}/{}", ratio.numer(), ratio.denom()),
            b2_le_b1: b2 <= b1,
            b2_minus_b1_le_minus_1: diff <= -1,
            b2_le_2b1_minus_2: (b2 as i64) <= 2 * b1 as i64 - 2,
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format(&self.generators)
    }

    /// Text form accepted by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.generators.join(" "));
        out.push_str("rels:");
        for (i, r) in self.relators.iter().enumerate() {
            let sep = if i + 1 < self.relators.len() { "," } else { "" };
            let _ = write!(out, "\n  {}{sep}", self.format_word(r));
        }
        out.push('\n');
        out
    }
}

fn is_keyword(tok: Option<&Token>, kw: &str) -> bool {
    matches!(tok, Some(Token { tok: Tok::Name(n), .. }) if n == kw)
}

fn at_end(cur: &Cursor<'_>) -> bool {
    cur.peek().is_none()
}

/// Parse a presentation file, including an optional `epi:` block.
pub fn parse_presentation_file(text: &str) -> std::result::Result<PresentationFile, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor::new(&toks);
    cur.skip_newlines();
    if !is_keyword(cur.peek(), "gens") {
        return Err(cur.error("expected `gens:` section"));
    }
    cur.bump();
    cur.expect(&Tok::Colon, "`:` after `gens`")?;
    let mut generators: Vec<String> = Vec::new();
    while let Some(t) = cur.peek() {
        match &t.tok {
            Tok::Newline => break,
            Tok::Name(n) => {
                if generators.contains(n) {
                    return Err(ParseError {
                        line: t.line,
                        column: t.column,
                        kind: ParseErrorKind::DuplicateGenerator(n.clone()),
                    });
                }
                generators.push(n.clone());
                cur.bump();
            }
            other => {
                return Err(ParseError::syntax(t.line, t.column, format!("expected a generator name, found {}", describe(other))))
            }
        }
    }
    cur.skip_newlines();

    let mut relators = Vec::new();
    if is_keyword(cur.peek(), "rels") && matches!(cur.peek_at(1), Some(Token { tok: Tok::Colon, .. })) {
        cur.bump();
        cur.bump();
        cur.skip_newlines();
        if !at_end(&cur) && !cur.at_section_header() {
            let parser = WordParser { names: &generators, multiline: true };
            loop {
                cur.skip_newlines();
                let (line, column) = cur.here();
                let w = parser.word(&mut cur)?;
                if w.is_identity() {
                    return Err(ParseError { line, column, kind: ParseErrorKind::EmptyRelator });
                }
                relators.push(w);
                cur.skip_newlines();
                if matches!(cur.peek(), Some(Token { tok: Tok::Comma, .. })) {
                    cur.bump();
                } else {
                    break;
                }
            }
        }
    }
    cur.skip_newlines();

    let mut epi = None;
    if is_keyword(cur.peek(), "epi") && matches!(cur.peek_at(1), Some(Token { tok: Tok::Colon, .. })) {
        cur.bump();
        cur.bump();
        epi = Some(parse_epi_tokens(&mut cur)?);
    }
    cur.skip_newlines();
    if let Some(t) = cur.peek() {
        return Err(ParseError::syntax(t.line, t.column, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(PresentationFile { presentation: Presentation { generators, relators }, epi })
}

/// Parse a presentation file, ignoring any `epi:` block.
pub fn parse_presentation(text: &str) -> std::result::Result<Presentation, ParseError> {
    parse_presentation_file(text).map(|f| f.presentation)
}

fn parse_epi_tokens(cur: &mut Cursor<'_>) -> std::result::Result<EpiSpec, ParseError> {
    cur.skip_newlines();
    if is_keyword(cur.peek(), "full") {
        cur.bump();
        return Ok(EpiSpec::Full);
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut row: Vec<i64> = Vec::new();
    while let Some(t) = cur.peek() {
        match &t.tok {
            Tok::Newline | Tok::Semicolon => {
                cur.bump();
                if !row.is_empty() {
                    rows.push(std::mem::take(&mut row));
                }
            }
            Tok::Minus | Tok::Int(_) => {
                let negative = matches!(t.tok, Tok::Minus);
                if negative {
                    cur.bump();
                }
                match cur.bump() {
                    Some(Token { tok: Tok::Int(v), line, column }) => {
                        let v = i64::try_from(*v).map_err(|_| ParseError::syntax(*line, *column, "entry out of range"))?;
                        row.push(if negative { -v } else { v });
                    }
                    Some(t) => {
                        return Err(ParseError::syntax(t.line, t.column, format!("expected an integer, found {}", describe(&t.tok))))
                    }
                    None => return Err(cur.error("expected an integer, found end of input")),
                }
            }
            other => {
                return Err(ParseError::syntax(t.line, t.column, format!("expected a matrix entry, found {}", describe(other))))
            }
        }
    }
    if !row.is_empty() {
        rows.push(row);
    }
    if let Some(first) = rows.first() {
        if let Some(bad) = rows.iter().position(|r| r.len() != first.len()) {
            let (l, c) = cur.here();
            return Err(ParseError::syntax(l, c, format!("epimorphism row {} has {} entries, expected {}", bad + 1, rows[bad].len(), first.len())));
        }
    }
    Ok(EpiSpec::Matrix(rows))
}

/// Parse an epimorphism given on the command line: `full` or `1 0; 0 1; 0 0`.
pub fn parse_epi_spec(text: &str) -> std::result::Result<EpiSpec, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor::new(&toks);
    let spec = parse_epi_tokens(&mut cur)?;
    if let Some(t) = cur.peek() {
        return Err(ParseError::syntax(t.line, t.column, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(spec)
}

/// Parse a witness file: one `name = word` per line.
pub fn parse_witnesses(text: &str, names: &[String]) -> std::result::Result<Vec<(usize, Word)>, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor::new(&toks);
    let parser = WordParser { names, multiline: false };
    let mut out: Vec<(usize, Word)> = Vec::new();
    loop {
        cur.skip_newlines();
        let Some(t) = cur.bump() else { break };
        let Tok::Name(name) = &t.tok else {
            return Err(ParseError::syntax(t.line, t.column, format!("expected a generator name, found {}", describe(&t.tok))));
        };
        let Some(g) = names.iter().position(|n| n == name) else {
            return Err(ParseError { line: t.line, column: t.column, kind: ParseErrorKind::UnknownGenerator(name.clone()) });
        };
        if out.iter().any(|(h, _)| *h == g) {
            return Err(ParseError::syntax(t.line, t.column, format!("second witness for `{name}`")));
        }
        cur.expect(&Tok::Equals, "`=`")?;
        let w = parser.word(&mut cur)?;
        match cur.peek() {
            None | Some(Token { tok: Tok::Newline, .. }) => {}
            Some(t) => return Err(ParseError::syntax(t.line, t.column, format!("unexpected {}", describe(&t.tok)))),
        }
        out.push((g, w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const WORKED: &str = "gens: x1 x2 x3\nrels: x3^-1*[x3,x1], x1^2*x3^2\n";

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn parse_worked_example() {
        let pres = parse_presentation(WORKED).unwrap();
        assert_eq!(pres.gen_count(), 3);
        assert_eq!(pres.relator_count(), 2);
        assert_eq!(pres.format_word(&pres.relators()[0]), "x3^-2*x1^-1*x3*x1");
        assert_eq!(pres.deficiency(), 1);
        let b = pres.complex_betti(p(2));
        assert_eq!((b.b0, b.b1, b.b2), (1, 2, 1));
    }

    #[test]
    fn free_and_surface() {
        let f2 = parse_presentation("gens: a b\nrels:\n").unwrap();
        assert_eq!(f2.relator_count(), 0);
        let f3 = Presentation::free(3);
        let b = f3.complex_betti(p(2));
        assert_eq!((b.b0, b.b1, b.b2), (1, 3, 0));
        assert_eq!(f3.deficiency(), 3);
        let g2 = parse_presentation("gens: a b c d\nrels: [a,b]*[c,d]").unwrap();
        let b = g2.complex_betti(p(2));
        assert_eq!((b.b1, b.b2), (4, 1));
        assert_eq!(g2.deficiency(), 3);
    }

    #[test]
    fn betti_condition_flags() {
        let worked = parse_presentation(WORKED).unwrap().betti_conditions(p(2));
        assert_eq!(worked.b2_minus_b1, -1);
        assert!(worked.b2_minus_b1_le_minus_1);
        assert_eq!(Presentation::free(2).betti_conditions(p(2)).b2_minus_b1, -2);
        let z2sq = parse_presentation("gens: a b\nrels: a^2, b^2, [a,b]").unwrap().betti_conditions(p(2));
        assert_eq!((z2sq.b1, z2sq.b2), (2, 3));
        assert!(!z2sq.b2_minus_b1_le_minus_1);
        assert!(!z2sq.b2_le_b1);
        assert_eq!(z2sq.b2_over_b1_plus_1, "1/1");
    }

    #[test]
    fn parse_errors() {
        let e = parse_presentation("gens: a b\nrels: a**b").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = parse_presentation("gens: a a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateGenerator("a".into()));
        let e = parse_presentation("gens: a\nrels: a*a^-1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyRelator);
        let e = parse_presentation("gens: a\nrels: b").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("b".into()));
        assert!(parse_presentation("rels: a").is_err());
        assert!(parse_presentation("gens: a\nrels: a b").is_err());
    }

    #[test]
    fn multiline_relators_and_comments() {
        let text = "# two relators\ngens: a b  # names\n\nrels: a*\n  b,\n  [a,b]\n";
        let pres = parse_presentation(text).unwrap();
        assert_eq!(pres.relator_count(), 2);
        assert_eq!(pres.format_word(&pres.relators()[0]), "a*b");
    }

    #[test]
    fn epi_blocks() {
        let f = parse_presentation_file("gens: a b\nepi: full\n").unwrap();
        assert_eq!(f.epi, Some(EpiSpec::Full));
        let f = parse_presentation_file("gens: a b\nrels: [a,b]\nepi:\n  1 0\n  0 -1\n").unwrap();
        assert_eq!(f.epi, Some(EpiSpec::Matrix(vec![vec![1, 0], vec![0, -1]])));
        assert_eq!(parse_epi_spec("1 0 0; 0 1 0").unwrap(), EpiSpec::Matrix(vec![vec![1, 0, 0], vec![0, 1, 0]]));
        assert!(parse_epi_spec("1 0; 1").is_err());
        assert!(parse_epi_spec("a").is_err());
    }

    #[test]
    fn witnesses() {
        let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let w = parse_witnesses("# f(x3)\nx3 = [[x3,x1],x1]\n", &names).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, 2);
        assert!(w[0].1.in_gamma2(2));
        assert!(parse_witnesses("x3 = x1\nx3 = x2\n", &names).is_err());
        assert!(parse_witnesses("x4 = x1\n", &names).is_err());
        assert!(parse_witnesses("x3 x1\n", &names).is_err());
    }

    #[test]
    fn round_trip() {
        for text in [WORKED, "gens: a b\nrels:", "gens: a b c d\nrels: [a,b]*[c,d]", "gens:\n"] {
            let pres = parse_presentation(text).unwrap();
            assert_eq!(parse_presentation(&pres.to_text()).unwrap(), pres);
        }
    }

    #[test]
    fn constructor_validates() {
        assert!(Presentation::new(vec!["a".into(), "a".into()], vec![]).is_err());
        assert!(Presentation::new(vec!["1a".into()], vec![]).is_err());
        assert!(Presentation::new(vec!["a".into()], vec![Word::generator(1)]).is_err());
        assert!(Presentation::new(vec!["a".into()], vec![Word::identity()]).is_err());
    }
}
