use thiserror::Error;

/// Errors raised by the numerical routines and the file parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("vector has zero norm")]
    ZeroVector,

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("Schmidt rank bound k = {k} outside 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("decomposition does not reconstruct the operator (residual {residual:.3e})")]
    DecompositionMismatch { residual: f64 },

    #[error("part {index} is not k-block positive (found <v|P|v> = {min_value:.3e})")]
    NotBlockPositive { index: usize, min_value: f64 },

    #[error("Choi matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
