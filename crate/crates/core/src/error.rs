use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OgsError {
    #[error("invalid penalty parameter: {0}")]
    InvalidPenalty(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cost is not strictly convex: a = {a} must be below 1/(K*lambda) = {bound}")]
    ConvexityViolation { a: f64, bound: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },

    #[error("bracketing failed: {0}")]
    Bracketing(String),

    #[error("calibration table is not monotone: {0}")]
    NonMonotoneTable(String),

    #[error("infeasible signal layout: {0}")]
    Infeasible(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
}

pub type Result<T> = std::result::Result<T, OgsError>;
