use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("series truncation failed after {terms} terms: {what}")]
    Truncation { what: String, terms: usize },

    #[error("accuracy target missed: estimate {estimate:e}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("atom construction failed: {0}")]
    Construction(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// True for failures caused by missed accuracy targets rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::Accuracy { .. } | Error::Numeric(_) | Error::Calibration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
