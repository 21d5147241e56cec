use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Shapes or dimensions of the inputs do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Malformed input value (bad exponent, empty space, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// The requested computation is not supported for this configuration.
    #[error("unsupported: {0}")]
    Capability(String),
    /// The computation would exceed a configured enumeration budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err<T>(what: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(what.into()))
}
