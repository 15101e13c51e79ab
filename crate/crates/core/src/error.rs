use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver failed to converge (residual {residual:.3e} after {iterations} iterations)")]
    SolverFailure { residual: f64, iterations: usize },

    #[error("wavefunction is not normalized (|norm - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("quartic grid too small: {0}")]
    GridTooSmall(String),

    #[error("dense oracle limited to N <= {max}, got N = {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("boson cutoff {cutoff} not converged (energy change {change:.3e})")]
    CutoffNotConverged { cutoff: usize, change: f64 },

    #[error("product-basis dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("sweep failed at N = {n}: {source}")]
    Sweep {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("power-law fit: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
