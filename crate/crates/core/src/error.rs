use thiserror::Error;

/// Errors raised by the library. Falsified hypotheses are not errors; they
/// are reported through [`crate::kropina::Certificate`] verdicts.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid inner product: {0}")]
    InvalidMetric(String),

    #[error("outside the Kropina domain: {0}")]
    Domain(String),

    #[error("chart radius too large: {0}")]
    Chart(String),

    #[error("sample rejected: {0}")]
    SampleRejected(String),

    #[error("not a reductive decomposition ({invariant}): {detail}")]
    NotReductive {
        invariant: &'static str,
        detail: String,
    },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}
