//! Formulas, their concrete syntax, and the purely syntactic notions the
//! rest of the crate is built on: polarity, surface occurrences, paths,
//! substitution and elementarization.

mod formula;
mod interp;
mod occurrence;
mod ops;
mod parser;
mod path;
mod printer;

pub use formula::{Children, Formula, FormulaError, Kind};
pub use interp::{evaluate, EvalError, Interpretation, InterpretationParseError};
pub use occurrence::{
    child_polarity, choice_occurrences, owner, polarity_at, surface_occurrences, Player, Polarity,
    SurfaceOccurrence,
};
pub use ops::{elementarize, is_elementary, resolve, substitute, PathError};
pub use parser::{parse_formula, ParseError, ParseErrorKind};
pub use path::{Path, PathParseError};
pub use printer::{render, render_unicode};
