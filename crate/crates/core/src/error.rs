use std::fmt;

use thiserror::Error;

/// Position-tagged failure from the text front ends (presentations,
/// witness files, epimorphism blocks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGenerator(String),
    DuplicateGenerator(String),
    EmptyRelator,
}

impl ParseError {
    pub fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        ParseError { line, column, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownGenerator(name) => write!(f, "unknown generator `{name}`"),
            ParseErrorKind::DuplicateGenerator(name) => {
                write!(f, "generator `{name}` declared twice")
            }
            ParseErrorKind::EmptyRelator => write!(f, "relator reduces to the empty word"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("cell budget exceeded: cover needs {required} cells, budget allows {allowed}")]
    BudgetExceeded { required: String, allowed: u64 },

    #[error("no mod-{p} homology: b1(G; F_{p}) = 0")]
    NoModPHomology { p: u32 },

    #[error("invalid epimorphism: {0}")]
    InvalidEpimorphism(String),

    #[error("weight condition violated by relator {relator} ({word}): {detail}")]
    WeightCondition { relator: usize, word: String, detail: String },

    #[error("missing witness for generator `{0}`")]
    MissingWitness(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("level {level} outside 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("invalid bound parameters: {0}")]
    InvalidBound(String),

    #[error("index {requested} exceeds the enumeration limit {limit}")]
    IndexLimit { requested: usize, limit: usize },

    #[error("word is not a relator: {0}")]
    NotARelator(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
