use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not square or is malformed: {0}")]
    Malformed(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary: |U*U - I|_op = {defect:e} exceeds {tolerance:e}")]
    NotUnitary { defect: f64, tolerance: f64 },

    #[error("matrix is not skew-Hermitian: |X + X*|_op = {defect:e} exceeds {tolerance:e}")]
    NotSkewHermitian { defect: f64, tolerance: f64 },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("matrix does not lie in the triangular subalgebra b+")]
    NotInBPlus,

    #[error("dimension {0} cannot carry a symmetric basis window (must be even and positive)")]
    OddDimension(usize),

    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("failed to parse matrix JSON: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
