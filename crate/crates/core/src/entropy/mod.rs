//! Numerical backend: density operators, purifications, Stinespring
//! dilations, von Neumann entropies and rate evaluation.
//!
//! All logarithms are base 2. Eigenvalues below [`EIGEN_FLOOR`] count as zero
//! in entropy sums and are dropped when purifying.

mod channel;
mod density;
mod evaluate;
mod linalg;
mod objects;
mod random;
mod rates;
mod state;

use alloc::string::String;
use thiserror::Error;

pub use channel::{channel_state, stinespring, ChannelFamily, QuantumChannel};
pub use density::{entropy, purify, DensityOp};
pub use evaluate::{evaluate, evaluate_raw, evaluate_raw_expr, EntropyProfile};
pub use linalg::{basis_vector, hermitian_eigen, kron, CMatrix, CVector};
pub use objects::{NoisyObject, ObjectKind, ObjectRegistry};
pub use random::{random_density, random_pure_qubit, random_tripartite, random_unitary};
pub use rates::{format_significant, rate_table, sweep, Rate, RateEntry, RateTable, SweepRow};
pub use state::{BipartitePureState, TripartitePureState};

/// Validation tolerance for density operators, channels and unit vectors.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as exactly zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("not Hermitian: max deviation {0:e} exceeds 1e-10")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1 within 1e-10")]
    BadTrace(f64),
    #[error("eigenvalue {0:e} below -1e-10")]
    NegativeEigenvalue(f64),
    #[error("state norm is {0}, expected 1 within 1e-10")]
    NotNormalized(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Kraus operators are not trace preserving: deviation {0:e} exceeds 1e-10")]
    NotTracePreserving(f64),
    #[error("channel needs at least one Kraus operator")]
    NoKraus,
    #[error("parameter {value} outside [0, 1] for channel family `{family}`")]
    OutOfDomain { family: String, value: f64 },
    #[error("unknown channel family `{0}`")]
    UnknownFamily(String),
    #[error("inequality `{ri}` needs a {want}, but `{object}` is a {got}")]
    KindMismatch { ri: String, object: String, want: &'static str, got: &'static str },
    #[error("inequality refers to `{handle}`, but the object is `{object}`")]
    HandleMismatch { handle: String, object: String },
}
