use thiserror::Error;

/// Errors surfaced by the library. Hypothesis violations are reported as
/// `Parameter` errors listing the failed hypothesis; they are never panics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("series error: {0}")]
    Series(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
