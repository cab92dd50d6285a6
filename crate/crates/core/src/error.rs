use thiserror::Error;

/// Errors raised by the simulator and the analytic evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller supplied an argument outside the accepted range, an unknown
    /// qubit label, or an inconsistent register.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The inputs are well formed but the requested quantity does not exist
    /// (zero-norm state, vanishing denominator, non-finite coefficient).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
