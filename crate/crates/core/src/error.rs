use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("non-physical state ({context}): rho={rho:e}, internal energy={internal_energy:e}")]
    NonPhysicalState {
        context: &'static str,
        rho: f64,
        internal_energy: f64,
    },

    #[error("degenerate Roe average: H - u^2/2 = {residual:e}")]
    DegenerateRoeAverage { residual: f64 },

    #[error("singular pivot in tridiagonal elimination at row {index}")]
    SingularPivot { index: usize },

    #[error("wave speeds out of order: s_l={s_l:e}, s_m={s_m:e}, s_r={s_r:e}")]
    WaveSpeedOrdering { s_l: f64, s_m: f64, s_r: f64 },

    #[error("star state undefined: edge speed equals contact speed ({speed:e})")]
    CoincidentWaveSpeeds { speed: f64 },

    #[error("no admissible root for the energy limiter in [0, 1]")]
    NoLimiterRoot,

    #[error("exact Riemann solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("non-finite value at step {step}, cell {cell}")]
    NonFinite { step: usize, cell: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reference cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
