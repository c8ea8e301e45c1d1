//! Harness-level errors, wrapping the core error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unknown method: {0}")]
    UnknownMethod(String),

    #[error("unknown sweep parameter: {0}")]
    UnknownParam(String),

    #[error("reports rank different method sets")]
    MethodSetMismatch,

    #[error(transparent)]
    Core(#[from] ecm_core::EcmError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
