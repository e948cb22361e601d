use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sign vectors disagree on shape: {0}")]
    ShapeMismatch(String),

    /// A search ran out of budget. The bounds established so far are kept.
    #[error("budget exceeded ({reason}); best bounds {lower}..={upper} after {nodes} nodes")]
    BudgetExceeded {
        reason: String,
        lower: usize,
        upper: usize,
        nodes: u64,
    },

    #[error("i/o failure: {0}")]
    Io(String),

    /// An existence claim that the constructions rely on turned out false
    /// on a concrete input. This always means a bug or a counterexample.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolated(msg.into())
    }
}
