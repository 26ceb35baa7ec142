use thiserror::Error;

/// Errors raised by the library layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("iterative decomposition did not converge: {0}")]
    ConvergenceFailure(&'static str),
    #[error("matrix is numerically singular: {0}")]
    Singular(&'static str),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("matrix is outside the Siegel disc (spectral norm {norm:.12})")]
    OutsideSiegelDisc { norm: f64 },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("Fock dimension {dim} exceeds cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("cutoff too small: truncation weight {weight:.3e} exceeds {limit:.1e}")]
    CutoffTooSmall { weight: f64, limit: f64 },
    #[error("matrix exponential overflow: norm {norm:.3e}")]
    Overflow { norm: f64 },
    #[error("invalid reference state: {0}")]
    InvalidReference(String),
    #[error("time window too narrow: {usable} usable points, need {required}")]
    WindowTooNarrow { usable: usize, required: usize },
    #[error("near-resonant time t = {t}: |sin(zeta t)| = {sin:.3e}")]
    NearResonance { t: f64, sin: f64 },
    #[error("overdamped parameters: Omega = {omega} must exceed 2 gamma0 = {two_gamma0}")]
    Overdamped { omega: f64, two_gamma0: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("integration step too large at t = {t}")]
    StepTooLarge { t: f64 },
}

impl Error {
    /// True for errors that come from numerics rather than input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_)
                | Error::ConvergenceFailure(_)
                | Error::NearResonance { .. }
                | Error::CutoffTooSmall { .. }
                | Error::Overflow { .. }
                | Error::StepTooLarge { .. }
                | Error::OutsideSiegelDisc { .. }
        )
    }

    pub(crate) fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
