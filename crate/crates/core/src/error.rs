use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("corrupt store: {0}")]
    CorruptStore(String),

    /// An exhaustively checked structural property did not hold.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for errors caused by the caller's input rather than by a failed check.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::Inconsistency(_))
    }
}
