use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("the cone is not pointed")]
    NotPointed,
    #[error("grading is not positive: generator {0} has degree {1}")]
    GradingNotPositive(String, String),
    #[error("a grading is required for the Hilbert series")]
    NoGrading,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    /// True for violated mathematical preconditions of the input, as opposed
    /// to malformed calls or internal failures.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotPointed | Error::GradingNotPositive(..) | Error::NoGrading
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
