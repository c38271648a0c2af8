use thiserror::Error;

/// Errors shared by every module of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine hit its iteration cap before reaching tolerance.
    /// Never silently approximated; the caller decides how to proceed.
    #[error("numeric error: {what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    /// A test specification is inconsistent (bad metric/family pairing,
    /// out-of-range significance level, ...).
    #[error("spec error: {0}")]
    Spec(String),

    /// Input data on which the requested statistic is undefined
    /// (zero pooled variance, all-zero counts, ...).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// An invalid simulation configuration, rejected before any work is done.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }
}
