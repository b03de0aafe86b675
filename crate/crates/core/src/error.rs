use thiserror::Error;

/// Errors produced by the library.
///
/// `Input` covers malformed or out-of-contract arguments (bad rank, empty
/// subset, pole on the grid, ...). `Numeric` covers failures of the numerical
/// machinery itself (non-convergence, ambiguous rank decisions, overflow).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
