use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Numerical breakdown inside the LP engine. Never used to signal a
    /// legitimate infeasible/unbounded status.
    #[error("solver error: {0}")]
    Solver(String),

    /// The branch-and-bound tree was exhausted without a feasible leaf. An
    /// epsilon-safe equilibrium always exists, so this is a bug.
    #[error("internal solver bug: {0}")]
    Internal(String),

    #[error("combinatorial budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("reduction violated: {0}")]
    ReductionViolated(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("iteration invariant violated at t = {iteration}: {detail}")]
    Invariant { iteration: usize, detail: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
