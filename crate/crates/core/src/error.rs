use thiserror::Error;

/// Errors shared by every module. The variant decides the CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),

    /// An iteration failed to converge.
    #[error("convergence error: {message} (residual {residual:e} after {iterations} iterations)")]
    Convergence {
        message: String,
        residual: f64,
        iterations: usize,
    },

    /// A size cap was exceeded.
    #[error("resource cap: {0}")]
    Resource(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code: 2 for bad input, 3 convergence, 4 resource, 1 io.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) => 2,
            Error::Convergence { .. } => 3,
            Error::Resource(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
