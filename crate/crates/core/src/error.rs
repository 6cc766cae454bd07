use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the operation's domain (unknown candidate, empty set, bad shape).
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A brute-force bound was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed text input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Internal consistency check failed, e.g. a model that violates its own formula.
    #[error("integrity error: {0}")]
    Integrity(String),
    /// External solver failed to run or produced an unexpected exit status.
    #[error("solver error: {0}")]
    Solver(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
