//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The caller passed something outside an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A quantity fell outside the interval an operation can handle.
    #[error("{what} = {value} is outside the attainable interval ({lo}, {hi})")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Malformed series description text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The computation is well posed but was declined (budget, positivity).
    #[error("refused: {0}")]
    Refused(String),

    /// Something that must hold by construction did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::OutOfRange { .. } | Error::Parse { .. } => 2,
            Error::Refused(_) => 3,
            Error::Invariant(_) => 4,
        }
    }
}
