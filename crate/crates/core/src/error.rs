//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by code construction, frame extraction and the dense oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("generator {0} is not Hermitian (phase must be +1 or -1)")]
    NonHermitian(usize),

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("generators are linearly dependent (symplectic rank {rank} < {count})")]
    DependentGenerators { rank: usize, count: usize },

    #[error("generators produce a non-trivial multiple of the identity (product over {0})")]
    ScalarInGroup(String),

    #[error("logical operators invalid: {0}")]
    InvalidLogicals(String),

    #[error("dense cap exceeded: n = {n} > {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("truncation set is not faithful: group element {0} truncates to the identity")]
    Unfaithful(String),

    #[error("no seed state found: {0}")]
    SeedNotFound(String),

    #[error("seed state is invalid: {0}")]
    InvalidSeed(String),

    #[error("state is not in the code space (residual {0:.3e})")]
    NotInCodeSpace(f64),

    #[error("orientation basis is not orthonormal (deviation {0:.3e})")]
    NonIdealBasis(f64),

    #[error("error set is not correctable: {0}")]
    NotCorrectable(String),

    #[error("error set is not maximal: {0}")]
    NotMaximal(String),

    #[error("ambiguous sector: {0}")]
    AmbiguousSector(String),

    #[error("codes do not match: {0}")]
    CodeMismatch(String),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown catalog entry '{0}'")]
    UnknownCode(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
