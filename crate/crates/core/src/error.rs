use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the operation's domain (shape mismatch, broken precondition).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured size or order cap was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A quantity that must be (near) integral or exact drifted beyond tolerance.
    #[error("numerical consistency failure: {0}")]
    NumericalConsistency(String),
    /// A quadrature or sampling scheme was too coarse for the requested accuracy.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// The LP solver hit its iteration guard.
    #[error("solver failure: {0}")]
    SolverFailure(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
