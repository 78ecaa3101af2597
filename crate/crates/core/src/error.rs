use thiserror::Error;

use crate::meigen::MEigenPair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Largest violation of `a[i1][j1][i2][j2] = a[i2][j1][i1][j2] = a[i1][j2][i2][j1]`.
    #[error("tensor is not biquadratic: max symmetry deviation {0:e}")]
    SymmetryViolation(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{routine} did not converge within {iterations} iterations")]
    ConvergenceFailure {
        routine: &'static str,
        iterations: usize,
    },

    /// The alternating M-eigen search stalled; the best iterate found is attached.
    #[error("M-eigenpair search did not converge (best residual {:e})", best.residual)]
    MEigenNoConvergence { best: Box<MEigenPair> },

    #[error("matrix is column-rank deficient (sigma_min / sigma_max = {ratio:e})")]
    RankDeficient { ratio: f64 },

    #[error("square flattening is singular (condition estimate {condition:e})")]
    SingularFlattening { condition: f64 },

    /// The matrix inverse of `M(A)` exists but does not fold back to a biquadratic tensor.
    #[error("inverse exists as a matrix but is not biquadratic (symmetry deviation {deviation:e})")]
    NotInvertibleInBQ { deviation: f64 },

    #[error("dimension too large for brute-force oracle: {0}")]
    DimensionTooLarge(String),

    #[error("interval bounds inconsistent: lower {lower} > upper {upper}")]
    IntervalInconsistent { lower: f64, upper: f64 },
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    /// True for errors caused by malformed or out-of-contract input, as opposed
    /// to numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::SymmetryViolation(_)
                | Error::DimensionMismatch(_)
                | Error::InvalidInput(_)
                | Error::DimensionTooLarge(_)
        )
    }
}
