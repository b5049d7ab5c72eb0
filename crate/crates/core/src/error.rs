use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus is the zero polynomial")]
    ZeroModulus,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ring level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("element is not a unit")]
    NotAUnit,

    #[error("W-sets are only defined for x+1 and self-reciprocal factors (f = {0})")]
    NotSelfReciprocal(String),

    #[error("search space 2^{bits} exceeds the brute-force bound 2^{bound}; use the recursion")]
    BoundExceeded { bits: usize, bound: usize },

    #[error("dimension {k} exceeds the exhaustive-sweep ceiling {ceiling}")]
    DimensionTooLarge { k: usize, ceiling: usize },

    #[error("rank deficiency: expected {expected}, got {got}")]
    RankDeficient { expected: usize, got: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("index {index} out of range (count {count})")]
    IndexOutOfRange { index: String, count: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
