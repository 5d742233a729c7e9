use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(i64),

    #[error("degree must be non-negative, got {0}")]
    NegativeDegree(i64),

    #[error("invalid degree range: l = {l}, m = {m} (need 1 <= l <= m)")]
    InvalidRange { l: i64, m: i64 },

    #[error("index {index} out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degree {degree} exceeds the largest stored eigenvalue degree {max}")]
    EigenvaluesExhausted { degree: usize, max: usize },

    #[error("eigenvalues must start at 0 and increase strictly: {0}")]
    InvalidEigenvalues(String),

    #[error("spectrum has a non-vanishing block at degree {degree} (squared norm {norm2:e}), below the admissible degree {min_degree}")]
    NonVanishingBlock { degree: usize, norm2: f64, min_degree: usize },

    #[error("block {degree} has {found} coefficients, expected {expected}")]
    BlockLength { degree: usize, expected: usize, found: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(String, String),

    #[error("grid too coarse for band limit {band_limit}: {detail}")]
    InsufficientResolution { band_limit: usize, detail: String },

    #[error("operation requires d in {{2, 3}}, got {0}")]
    UnsupportedDimension(String),

    #[error("body is not convex: {0}")]
    NotConvex(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mean width of the reference body must be positive, got {0}")]
    NonPositiveMeanWidth(f64),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
