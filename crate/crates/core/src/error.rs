//! Crate-wide error type.

use num_complex::Complex64;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series did not converge within {max_terms} terms")]
    SeriesCap { max_terms: usize },

    #[error("quadrature tolerance not met: estimate {estimate}, error bound {error}")]
    ToleranceNotMet { estimate: Complex64, error: f64 },

    #[error("integration path passes within {distance:e} of singular point {point}")]
    SingularPointOnPath { point: Complex64, distance: f64 },

    #[error("branch point detected inside contour: relative mismatch {mismatch:e} after one turn")]
    BranchPointDetected { mismatch: f64 },

    #[error("too few points: need at least {need}, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("overflow guard: log-magnitude {log_magnitude} outside representable range")]
    OverflowGuard { log_magnitude: f64 },

    #[error("no admissible resonant sqrt(eps) in the requested index range")]
    EmptySequence,

    #[error("Stokes jump is x-dependent: spread {spread:e} exceeds tolerance {tol:e}")]
    XDependent { spread: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
