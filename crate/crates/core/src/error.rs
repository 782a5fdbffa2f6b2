use thiserror::Error;

/// Errors for state construction, numerics, and the Fock referee.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("truncation too small: population leak {leak:.3e} exceeds {tol:.3e}, suggest dim >= {suggested}")]
    Truncation { leak: f64, tol: f64, suggested: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("sampler acceptance rate below 1% over {attempts} attempts for family {family}; widen the parameter ranges")]
    AcceptanceRate { family: String, attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
