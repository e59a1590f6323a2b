use thiserror::Error;

/// Errors raised by the numeric engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "quadrature did not converge after {levels} levels \
         (last difference {last_difference:e}, tolerance {tolerance:e})"
    )]
    NonConvergence {
        levels: u32,
        last_difference: f64,
        tolerance: f64,
    },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid precision context: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
