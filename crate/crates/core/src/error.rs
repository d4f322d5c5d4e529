use thiserror::Error;

/// Errors raised by the library. Validation failures of a whole complex are
/// reported through [`crate::complex::ValidationReport`] instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not integral: entry ({row}, {col}) = {value}")]
    NotIntegral { row: usize, col: usize, value: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("matrix is not self-adjoint with respect to the supplied metric")]
    NotSelfAdjoint,

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("metric (gram matrices) required for {0}")]
    MissingGram(&'static str),

    #[error("group action required for {0}")]
    MissingAction(&'static str),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("complex is not rationally acyclic: H^{degree} has free rank {rank}")]
    NotAcyclic { degree: i64, rank: usize },

    #[error("exact twisted torsion only for p = 2 (got p = {0}); use the numeric path")]
    UnsupportedOrder(u32),

    #[error("eigenspace traces are not all rational integers; exact evaluation unavailable")]
    NonIntegralTraces,

    #[error("volume form: {0}")]
    VolumeForm(String),

    #[error("invalid cell data: {0}")]
    Cell(String),

    #[error("Morse-Smale differential does not square to zero between {from} and {to}")]
    MorseSquare { from: String, to: String },

    #[error("polynomial modulus must be monic of positive degree")]
    NotMonic,

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("document error at {path}: {message}")]
    Document { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
