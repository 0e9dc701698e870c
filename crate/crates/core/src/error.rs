use thiserror::Error;

/// Errors raised by the cocycle toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Matrix or list shapes do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A computation would exceed the supported desk-scale size.
    #[error("size limit exceeded: {0}")]
    Size(String),
    /// A mathematical precondition on the input does not hold
    /// (wrong rank, vanishing Θ_k, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Malformed user input (files, flags, numbers).
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
