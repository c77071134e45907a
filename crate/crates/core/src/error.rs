use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants are grouped by how a caller is expected to react: a
/// [`Error::Domain`] is a usage problem, the precision variants ask for a retry
/// at more digits, and [`Error::Inconsistent`] signals that two independent
/// constructions disagree.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision exhausted in {context} at {digits} digits; retry at higher precision")]
    PrecisionExhausted { context: String, digits: u32 },

    #[error("positivity lost at index {index} (last attempt at {digits} digits, cap {cap} digits)")]
    PositivityLost { index: usize, digits: u32, cap: u32 },

    #[error("recurrence degenerated at index {index} (last attempt at {digits} digits, cap {cap} digits)")]
    Degenerate { index: usize, digits: u32, cap: u32 },

    #[error("series for {context} did not converge within {terms} terms")]
    SeriesDivergence { context: String, terms: usize },

    #[error("root iteration did not converge after {iterations} sweeps; unconverged indices {unconverged:?}")]
    NoConvergence {
        iterations: usize,
        unconverged: Vec<usize>,
    },

    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the errors that a retry at higher precision may resolve.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::PositivityLost { .. }
                | Error::Degenerate { .. }
                | Error::NoConvergence { .. }
        )
    }
}
