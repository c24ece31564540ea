use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("series truncated at order {order}, derivative of order {needed} requested")]
    Precision { order: u32, needed: u32 },

    #[error("formula not applicable: {0}")]
    NotApplicable(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("quadrature did not converge: estimated error {achieved:e} > tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("unsupported by the numerical oracle: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition failed ({hypothesis}): {detail}")]
    Precondition { hypothesis: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
