use thiserror::Error;

/// Errors surfaced by the library. Each variant maps to a distinct CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An exhaustive computation would exceed its configured budget. Never
    /// replaced by an estimate.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
