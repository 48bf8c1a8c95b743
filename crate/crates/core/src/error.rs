use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A documented precondition of an operation was not met.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Bad user input (preset name, signature string, symmetry string).
    #[error("parse error: {0}")]
    Parse(String),
    /// A tensor handed to component extraction does not lie in the subspace.
    #[error("tensor is outside the decomposed subspace")]
    OutsideSubspace,
    /// An exactness check failed. This means an arithmetic or algorithmic bug
    /// and the computation must not be trusted.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// A translated tensor formula did not reproduce its monomial.
    #[error("translation mismatch for {generator}: {detail}")]
    Translation { generator: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}
