use thiserror::Error;

/// Errors produced by the economic-life library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("{0}")]
    InvalidInput(String),

    /// A special-function argument lies outside the function's real domain.
    #[error("{function}: argument {arg} outside domain ({reason})")]
    Domain {
        function: &'static str,
        arg: f64,
        reason: &'static str,
    },

    /// An iterative method did not converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Domain { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
