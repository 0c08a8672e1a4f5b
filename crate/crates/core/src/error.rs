use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("support violation: {0}")]
    Support(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("too many degenerate points: {skipped} of {total} skipped")]
    Degenerate { skipped: usize, total: usize },

    #[error("quantile bracketing failed for probability {0}")]
    Bracketing(f64),

    #[error("table size cap of {cap} entries exceeded")]
    TableCap { cap: usize },

    #[error("incompatible distributions: {0}")]
    Incompatible(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
