use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("state must have unit trace (got {0})")]
    NonUnitTrace(f64),

    #[error("series truncation order {0} exceeds the supported maximum of 64")]
    KmaxTooLarge(usize),

    #[error("numerical rank unstable across seeds at degree {degree}: {first} vs {second}")]
    UnstableRank {
        degree: usize,
        first: usize,
        second: usize,
    },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
