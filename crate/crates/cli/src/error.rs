//! Exit-code discipline: 0 success, 1 failed check or runtime error,
//! 2 usage error.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or inputs; exits with status 2.
    #[error("{0}")]
    Usage(String),
    /// A verification the command performs did not hold; exits with 1.
    #[error("{0}")]
    Check(String),
    /// I/O or computation failure; exits with 1.
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
