use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Capacity`] to exit code 3 and everything else that
/// stems from bad input to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The rooted tree fails the balance condition; `witness` is a subset of
    /// unrooted vertices whose density is below the tree density.
    #[error("rooted tree is not balanced (witness subset {witness:?})")]
    Unbalanced { witness: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
