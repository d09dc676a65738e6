use thiserror::Error;

/// Errors raised by the engine. Each variant maps onto a distinct CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdpError {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {what} is {actual}, limit {limit}")]
    Budget {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl TdpError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        TdpError::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, TdpError>;
