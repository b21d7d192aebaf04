use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    /// An internal book-keeping bound was broken. This is never a silent
    /// wrong answer: the solve aborts loudly instead.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}
