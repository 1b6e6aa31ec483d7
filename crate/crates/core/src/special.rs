//! Complex special functions: principal-branch log-Gamma, Gamma, the entire
//! reciprocal Gamma, Euler-reflection self-test and Bessel J of complex order.
//!
//! Downstream formulas evaluate every Gamma ratio as `exp(sum of +-log_gamma)`
//! so that arguments of size `beta/(2 sqrt(eps)) ~ 1e2..1e4` never overflow.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Recurrence target for the Stirling expansion: shift until `Re z >= 12`.
const STIRLING_MIN_RE: f64 = 12.0;

/// Stirling-series coefficients `B_{2j} / (2j (2j-1))`.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Relative-term stopping rule shared by the series in this crate: stop once
/// the last term is below `rel_tol` of the accumulated sum for three
/// consecutive terms, with a hard cap.
pub const SERIES_REL_TOL: f64 = 1e-16;
pub const SERIES_MAX_TERMS: usize = 100_000;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Stirling asymptotic expansion, valid for `Re z >= STIRLING_MIN_RE`.
fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let half_ln_two_pi = 0.5 * (2.0 * PI).ln();
    let rz = 1.0 / z;
    let rz2 = rz * rz;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = rz;
    for c in STIRLING_COEFFS {
        corr += c * p;
        p *= rz2;
    }
    (z - 0.5) * z.ln() - z + half_ln_two_pi + corr
}

/// Principal branch of log-Gamma, continuous on the plane cut along the
/// non-positive real axis and real on the positive reals. Values on the cut
/// itself are the limits from the upper half-plane.
///
/// Accurate up to |z| ~ 1e4 (asymptotic expansion plus recurrence).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("log_gamma of non-finite {z}")));
    }
    // lnGamma(z) = lnGamma(z + n) - sum_{k<n} Log(z + k); both sides analytic
    // off the cut, equal on the positive reals, hence equal everywhere there.
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < STIRLING_MIN_RE {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling_ln_gamma(w) - shift)
}

/// Gamma via `exp(log_gamma)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// The entire function `1/Gamma(z)`; exactly zero at the non-positive
/// integers.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        return (-log_gamma(z).expect("pole excluded")).exp();
    }
    // Reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi.
    let s = (PI * z).sin();
    if s.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let lg = log_gamma(Complex64::new(1.0, 0.0) - z).expect("1 - z off the cut");
    (s.ln() + lg - Complex64::new(PI.ln(), 0.0)).exp()
}

/// Relative residual of Euler's reflection identity
/// `Gamma(1-z) Gamma(z) = pi / sin(pi z)`; a roundoff-level self-test.
pub fn reflection_residual(z: Complex64) -> Result<f64> {
    if z.im == 0.0 && z.re == z.re.round() {
        return Err(Error::domain(format!(
            "reflection residual undefined for integer z = {z}"
        )));
    }
    let lhs = (log_gamma(z)? + log_gamma(Complex64::new(1.0, 0.0) - z)?).exp();
    let rhs = Complex64::new(PI, 0.0) / (PI * z).sin();
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Bessel function of the first kind, complex order and argument, by its
/// defining power series with the principal branch of `(z/2)^nu`.
pub fn bessel_j(nu: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        if nu.norm() == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if nu.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::domain(format!(
            "J_nu(0) unbounded for Re(nu) < 0 (nu = {nu})"
        )));
    }
    let half = z / 2.0;
    let prefactor = (nu * half.ln()).exp();
    let msq = -half * half;
    let mut u = Complex64::new(1.0, 0.0); // (-(z/2)^2)^n / n!
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0u32;
    let mut peak = 0.0f64;
    for n in 0..SERIES_MAX_TERMS {
        let term = u * reciprocal_gamma(nu + (n as f64 + 1.0));
        sum += term;
        peak = peak.max(sum.norm()).max(term.norm());
        if peak > 0.0 && term.norm() <= SERIES_REL_TOL * peak {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        u *= msq / (n as f64 + 1.0);
    }
    Ok(prefactor * sum)
}

/// First positive zero of `J_0`, by bisection on its own series evaluation.
pub fn j0_first_zero() -> f64 {
    let f = |x: f64| {
        bessel_j(Complex64::new(0.0, 0.0), Complex64::new(x, 0.0))
            .expect("J_0 entire")
            .re
    };
    let (mut a, mut b) = (2.0_f64, 3.0_f64);
    debug_assert!(f(a) > 0.0 && f(b) < 0.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-16 * b {
            break;
        }
    }
    0.5 * (a + b)
}

/// log of n! for real n >= 0.
pub fn ln_factorial(n: u64) -> f64 {
    log_gamma(Complex64::new(n as f64 + 1.0, 0.0))
        .expect("positive argument")
        .re
}
