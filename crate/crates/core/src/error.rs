use thiserror::Error;

/// Errors raised by the flattening, rank and bound machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("the zero linear form has no nonzero powers")]
    ZeroLinearForm,

    #[error("shape does not fit: {0}")]
    ShapeMismatch(String),

    #[error("{0} is not an odd prime below 2^32")]
    NotPrime(u64),

    #[error("entry ({row}, {col}) has denominator {den} divisible by the modulus {modulus}")]
    SingularDenominator {
        row: usize,
        col: usize,
        den: String,
        modulus: u64,
    },

    #[error("matrix of {rows}x{cols} exceeds the dense size guard; request multi-prime mode")]
    SizeGuard { rows: usize, cols: usize },

    #[error("projected fill of {needed} bytes exceeds the memory cap of {cap} bytes")]
    MemoryCap { needed: u64, cap: u64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("cache mismatch: {0}")]
    CacheMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
