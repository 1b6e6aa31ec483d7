//! Analytic invariants of the reducible double confluent Heun equation
//! `w'' + [alpha/x - beta/x^2 - gamma] w' = 0` and of its general symmetric
//! unfolding, the Fuchsian equation with singular points at `+-sqrt(eps)`,
//! `+-1/sqrt(eps)` and infinity.
//!
//! The crate computes the closed-form invariants (local monodromy matrices,
//! the Stokes multiplier `mu`, the logarithmic-term residues `q_L`, `q_R`,
//! `d_L`), verifies them against contour-integral and loop-continuation
//! oracles, resums the divergent formal solutions at the irregular origin by
//! Borel-Laplace integrals, and drives `sqrt(eps) -> 0` sweeps that connect
//! the unfolded invariants with the confluent ones.
//!
//! Modules map onto the main subsystems:
//!
//! - [`special`]: complex log-Gamma, reciprocal Gamma, Bessel J.
//! - [`dche`]: the confluent equation, its singularity classes and invariants.
//! - [`unfold`]: the unfolded equation, residues and unfolded monodromy.
//! - [`oracle`]: complex-path quadrature, contour residues, loop monodromy.
//! - [`limits`]: extrapolated `sqrt(eps) -> 0` sweeps with verdicts.
//! - [`resum`]: formal series, Borel-plane functions, Laplace sums and the
//!   lateral Stokes jump.

pub mod cjson;
pub mod dche;
pub mod error;
pub mod limits;
pub mod matrix;
pub mod oracle;
pub mod resum;
pub mod special;
pub mod unfold;

mod ddc;

pub use dche::{AlphaClass, DcheParams, OriginKind, SeriesInvariant, SeriesKind, SolutionClass};
pub use error::{Error, Result};
pub use limits::{SweepReport, Verdict};
pub use matrix::Matrix2C;
pub use num_complex::Complex64;
pub use oracle::{ComplexPath, QuadratureConfig};
pub use resum::{FormalSeries, RayDirection, SeriesFamily};
pub use unfold::{NilpotentLog, NilpotentSlot, ResonanceCase, SingularPoints, UnfoldParams};

/// 2*pi*i, the residue normalization used throughout.
pub fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * std::f64::consts::PI)
}
