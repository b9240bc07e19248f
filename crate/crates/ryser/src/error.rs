use std::fmt;
use std::io;

/// Errors produced by the library.
///
/// `Inconsistency` is reserved for conditions that are mathematically
/// impossible for genuine Ryser designs; hitting one means either the input
/// was not what it claimed to be or there is a bug, so callers treat it as
/// fatal rather than recoverable.
#[derive(Debug)]
pub enum Error {
    /// A design file could not be parsed. `line` is 1-based.
    Parse { line: usize, message: String },
    /// An operation was called with arguments that violate its contract
    /// (bad base set, index out of range, structure that is not a Ryser
    /// design, matrix of the wrong shape or rank, ...).
    InvalidInput(String),
    /// An exact identity that must hold for every Ryser design failed.
    Inconsistency(String),
    Io(io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Inconsistency(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
