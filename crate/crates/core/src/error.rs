use thiserror::Error;

/// Errors produced by the spectral calculus, the oracles and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (symmetry residual {residual:e}, tolerance {tolerance:e})")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} does not factor as {dim_a} x {dim_b}")]
    Factorization {
        dim: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("eigenvalue {value:e} lies outside the domain ({lo}, {hi})")]
    DomainViolation { value: f64, lo: f64, hi: f64 },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unit-trace root not bracketed on [{lo:e}, {hi:e}]")]
    RootFinding { lo: f64, hi: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("infeasible problem data: {0}")]
    Infeasible(String),

    #[error("numerical failure at iteration {iteration}: {detail}")]
    NumericalFailure { iteration: usize, detail: String },

    #[error("suspected infeasibility at iteration {iteration}: dual norm {dual_norm:e}")]
    SuspectedInfeasible { iteration: usize, dual_norm: f64 },

    #[error("backtracking did not terminate within {trials} trials at iteration {iteration}")]
    BacktrackingExhausted { iteration: usize, trials: usize },

    #[error("instance generation exhausted {attempts} resamples: {reason}")]
    ResampleBudget { attempts: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
