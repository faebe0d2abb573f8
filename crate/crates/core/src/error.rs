use thiserror::Error;

/// Errors raised when an operation's preconditions are not met.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^H| = {max_asymmetry:e} (relative {relative:e})")]
    NotHermitian { max_asymmetry: f64, relative: f64 },

    #[error("matrix is not unitary: max |W^H W - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("phase precondition violated: {0}")]
    PhasePrecondition(String),

    #[error("undefined phase: {0}")]
    UndefinedPhase(&'static str),

    #[error("internal consistency check failed: {what} deviates by {deviation:e}")]
    Inconsistent { what: &'static str, deviation: f64 },

    #[error("{0}")]
    Unsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range<T>(what: &'static str, value: f64, range: &'static str) -> Result<T> {
    Err(Error::OutOfRange { what, value, range })
}
