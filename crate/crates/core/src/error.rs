use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input vectors or matrices had incompatible shapes.
    #[error("shape error: {0}")]
    Shape(String),

    /// A regressor or response was constant where variation is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Too few complete observations to run the requested analysis.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A file failed to parse; carries the 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
