use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular grid: nodes {0} and {1} coincide")]
    SingularGrid(usize, usize),

    #[error("mass matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("eigensolver failed to converge after {0} iterations")]
    NoConvergence(usize),

    #[error("matrix dimension {0} exceeds the dense solver ceiling {1}")]
    TooLarge(usize, usize),

    #[error("spectrum has imaginary parts up to {max_imag:e} (limit {limit:e})")]
    ExcessiveImaginary { max_imag: f64, limit: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("zero reference eigenvalue at index {0}")]
    ZeroReference(usize),

    #[error("zero index is not a valid signed eigenvalue index")]
    ZeroIndex,

    #[error("bracket [{lo}, {hi}] does not enclose level {level}")]
    BracketFailure { lo: f64, hi: f64, level: f64 },

    #[error("value {0} outside the admissible range [{1}, {2}]")]
    OutOfRange(f64, f64, f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
