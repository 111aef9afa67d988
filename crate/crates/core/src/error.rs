use thiserror::Error;

/// Errors surfaced by the library. Contract violations are reported rather
/// than panicking so that the CLI can map them to exit codes.
#[derive(Debug, Error)]
pub enum JumpGaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, JumpGaError>;
