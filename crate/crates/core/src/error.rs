use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FarkasError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An equivalence that must hold for every valid input did not.
    #[error("equivalence violated: {0}")]
    Violated(String),
}

pub type Result<T, E = FarkasError> = std::result::Result<T, E>;

pub(crate) fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(FarkasError::Dimension(format!("{what}: expected {expected}, got {got}")))
    }
}
