//! Mod-p homology of abelian covers of presentation complexes, explicit
//! cocycle constructions, homology growth bounds and small-index subgroup
//! counts for finitely presented groups.

pub mod bounds;
pub mod census;
pub mod cochain;
pub mod cover;
pub mod error;
pub mod linalg;
pub mod presentation;
pub mod series;
pub mod syntax;
pub mod word;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use linalg::{FpMatrix, Prime};
pub use word::{GeneratorId, Letter, Word};
