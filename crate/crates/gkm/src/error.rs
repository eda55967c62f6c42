use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Error, Debug)]
pub enum GkmError {
    /// A precondition on the inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configured bound (group order, degree cap) was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A verification step found an actual mismatch.
    #[error("verification failure: {0}")]
    VerificationFailure(String),

    /// An internal consistency check failed; this signals a bug in a
    /// convention, not a mathematical failure of the input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GkmError>;

pub(crate) fn invalid(msg: impl Into<String>) -> GkmError {
    GkmError::InvalidArgument(msg.into())
}
