//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by dataset I/O, parameter validation, and metrics.
#[derive(Debug, Error)]
pub enum EcmError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// CSV cell or row that failed to parse; positions are 1-based.
    #[error("parse error at row {row}, column {col}: {message}")]
    Parse {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("label sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("empty front")]
    EmptyFront,

    /// Spacing needs at least two front points.
    #[error("front has {0} point(s); at least 2 required")]
    TooFewPoints(usize),

    #[error("unknown dataset name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, EcmError>;
