use alloc::string::String;
use core::fmt;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The caller violated a precondition.
    InvalidInput(String),
    /// A polynomial division left a nonzero remainder.
    InexactDivision,
    /// A mathematical guarantee failed to hold. Never expected; indicates a bug
    /// upstream or a genuine counterexample.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InexactDivision => f.write_str("inexact polynomial division"),
            Error::Internal(msg) => write!(f, "internal assertion failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}
