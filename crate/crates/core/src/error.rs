use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("genus must be >= {min}, got {genus}")]
    GenusOutOfRange { genus: usize, min: usize },
    #[error("surface mismatch: expected {expected} edge weights, got {got}")]
    SurfaceMismatch { expected: usize, got: usize },
    #[error("invalid coordinates in triangle {triangle}: {reason}")]
    InvalidCoordinates { triangle: usize, reason: String },
    #[error("inessential curve")]
    InessentialCurve,
    #[error("not a single curve: {0}")]
    NotACurve(String),
    #[error("curve too large to realize explicitly (total weight {0})")]
    TooLarge(String),
    #[error("weight cap exceeded: {bits} bits > {cap}")]
    WeightCap { bits: u64, cap: u64 },
    #[error("could not shorten twist axis: {0}")]
    Shorten(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("seed invalid: {0}")]
    SeedInvalid(String),
    #[error("verification failed: {0}")]
    Falsified(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
