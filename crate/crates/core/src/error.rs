use thiserror::Error;

/// Errors raised by the circle, group and completion operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("not covered: {0} is a cycle point")]
    NotCovered(String),
    #[error("not a circular isomorphism: {0}")]
    NotCircularIsomorphism(String),
    #[error("undecided at precision {0}")]
    Undecided(u32),
    #[error("stream does not shrink within {0} refinements")]
    StreamDoesNotShrink(u32),
    #[error("points not separated within {0} refinements")]
    NotSeparated(u32),
    #[error("rejected: {0}")]
    Precondition(String),
    #[error("refinement cap {0} exceeded")]
    CapExceeded(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
