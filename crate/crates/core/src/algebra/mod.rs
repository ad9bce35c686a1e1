//! Resources, entropic coefficients and resource inequalities.

pub mod expr;
pub mod inequality;
pub mod resource;
pub mod text;

use alloc::string::String;
use thiserror::Error;

pub use expr::{canonical_symbol, canonicalize, EntropicExpr, Generator, Parties, RawExpr, RawSymbol, Rational};
pub use inequality::{Mode, ResourceInequality, RuleFlags};
pub use resource::{ResourceKind, ResourceVector};
pub use text::{format_ri, parse_expr, parse_kind, parse_raw_expr, parse_ri, parse_vector, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("nonlinear product of `{left}` and `{right}`")]
    NonlinearProduct { left: String, right: String },
    #[error("noisy resources can only be scaled by nonnegative constants, got `{0}`")]
    NoisyScale(String),
    #[error("noisy resource {kind} needs a whole nonnegative count, got `{coeff}`")]
    FractionalNoisy { kind: String, coeff: String },
    #[error("{0} hand side is empty")]
    EmptySide(&'static str),
}
