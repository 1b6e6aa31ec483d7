//! The reducible double confluent Heun equation
//! `w'' + [alpha/x - beta/x^2 - gamma] w' = 0` with `beta >= 0` real:
//! singularity classification at the origin, the resonant-regular monodromy,
//! the Stokes multiplier at the irregular origin, and the three convergent
//! number series that decide whether the equation has a solution holomorphic
//! in the punctured plane.

use crate::error::{Error, Result};
use crate::matrix::Matrix2C;
use crate::special::{reciprocal_gamma, SERIES_MAX_TERMS};
use crate::two_pi_i;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const INT_TOL: f64 = 1e-12;

/// Which of the four disjoint parameter regimes `alpha` falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaClass {
    /// alpha in 2N = {2, 4, 6, ...}
    EvenNatural,
    /// alpha in N but odd
    Natural,
    /// alpha in {0, -1, -2, ...}
    NonPositiveInteger,
    /// alpha not an integer (possibly complex)
    NonInteger,
}

impl AlphaClass {
    pub fn is_natural(self) -> bool {
        matches!(self, AlphaClass::EvenNatural | AlphaClass::Natural)
    }
}

/// Kind of singularity at the origin of the confluent equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginKind {
    RegularResonant,
    RegularNonresonant,
    IrregularRank1,
}

/// Parameters `(alpha, beta, gamma)` of the reducible equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DcheParams {
    #[serde(with = "crate::cjson::c64")]
    pub alpha: Complex64,
    /// Real and non-negative (a rotation of x normalizes the equation so).
    pub beta: f64,
    #[serde(with = "crate::cjson::c64")]
    pub gamma: Complex64,
}

impl DcheParams {
    pub fn new(alpha: Complex64, beta: f64, gamma: Complex64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::pre(format!(
                "beta must be real and non-negative, got {beta}"
            )));
        }
        if !alpha.is_finite() || !gamma.is_finite() {
            return Err(Error::pre("alpha and gamma must be finite".to_string()));
        }
        Ok(Self { alpha, beta, gamma })
    }

    /// Integer value of alpha, when it is one (within 1e-12).
    pub fn alpha_integer(&self) -> Option<i64> {
        if self.alpha.im.abs() > INT_TOL {
            return None;
        }
        let r = self.alpha.re.round();
        if (self.alpha.re - r).abs() <= INT_TOL * (1.0 + r.abs()) {
            Some(r as i64)
        } else {
            None
        }
    }

    pub fn alpha_class(&self) -> AlphaClass {
        match self.alpha_integer() {
            Some(n) if n >= 1 && n % 2 == 0 => AlphaClass::EvenNatural,
            Some(n) if n >= 1 => AlphaClass::Natural,
            Some(_) => AlphaClass::NonPositiveInteger,
            None => AlphaClass::NonInteger,
        }
    }
}

/// Singularity kind at the origin: irregular of rank 1 iff `beta > 0`;
/// for `beta = 0` resonant iff `alpha` is an even natural number.
pub fn classify_origin(p: &DcheParams) -> OriginKind {
    if p.beta > 0.0 {
        OriginKind::IrregularRank1
    } else if p.alpha_class() == AlphaClass::EvenNatural {
        OriginKind::RegularResonant
    } else {
        OriginKind::RegularNonresonant
    }
}

fn require_regular_resonant(p: &DcheParams) -> Result<u32> {
    if p.beta != 0.0 || p.alpha_class() != AlphaClass::EvenNatural {
        return Err(Error::pre(
            "regular-resonant case requires beta = 0 and alpha an even natural number",
        ));
    }
    Ok(p.alpha_integer().expect("even natural") as u32)
}

/// The coefficient of the logarithm in the resonant-regular solution at the
/// origin: `lambda = gamma^(alpha-1) / (alpha-1)!`.
pub fn lambda_coefficient(p: &DcheParams) -> Result<Complex64> {
    let a = require_regular_resonant(p)?;
    let mut fact = 1.0;
    for j in 2..a {
        fact *= j as f64;
    }
    Ok(p.gamma.powu(a - 1) / fact)
}

/// Local monodromy of the resonant-regular origin: `[[1, 2 pi i lambda], [0, 1]]`.
pub fn monodromy_m0(p: &DcheParams) -> Result<Matrix2C> {
    Ok(Matrix2C::unipotent_upper(
        two_pi_i() * lambda_coefficient(p)?,
    ))
}

/// The three absolutely convergent number series attached to the formal
/// solution at the irregular origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    S,
    W,
    Q,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesInvariant {
    pub kind: SeriesKind,
    #[serde(with = "crate::cjson::c64vec")]
    pub partial_sums: Vec<Complex64>,
    #[serde(with = "crate::cjson::c64")]
    pub limit: Complex64,
    pub converged: bool,
}

const INVARIANT_REL_TOL: f64 = 1e-15;

/// Sum `sum_k (-1)^k beta^k gamma^k / (k! Gamma(2 - alpha + k))`, recording
/// partial sums; this is the S-type series, also the mu series numerator.
fn alternating_gamma_series(
    alpha: Complex64,
    beta: f64,
    gamma: Complex64,
    beta_power_offset: Complex64,
) -> (Vec<Complex64>, Complex64, bool) {
    gamma_weighted_series(beta, gamma, beta_power_offset, |k| {
        reciprocal_gamma(Complex64::new(2.0 + k as f64, 0.0) - alpha)
    })
}

/// The W-type series `sum_k (-1)^k beta^k gamma^k / (k! Gamma(alpha + k))`.
fn w_series(alpha: Complex64, beta: f64, gamma: Complex64) -> (Vec<Complex64>, Complex64, bool) {
    gamma_weighted_series(beta, gamma, Complex64::new(1.0, 0.0), |k| {
        reciprocal_gamma(alpha + k as f64)
    })
}

/// `scale * sum_k (-beta gamma)^k weight(k) / k!` with recorded partial
/// sums. The stopping rule tracks the running peak magnitude so that leading
/// zero terms (reciprocal-Gamma poles) never trigger early termination, and
/// a vanished power factor (gamma = 0) ends the sum at once.
fn gamma_weighted_series(
    beta: f64,
    gamma: Complex64,
    scale: Complex64,
    weight: impl Fn(usize) -> Complex64,
) -> (Vec<Complex64>, Complex64, bool) {
    let mut partials = Vec::new();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut u = Complex64::new(1.0, 0.0); // (-beta gamma)^k / k!
    let mut small = 0u32;
    let mut converged = false;
    let mut peak = 0.0f64;
    for k in 0..SERIES_MAX_TERMS {
        let term = u * weight(k);
        sum += term;
        partials.push(sum);
        peak = peak.max(sum.norm()).max(term.norm());
        u *= -beta * gamma / (k as f64 + 1.0);
        if u.norm() == 0.0 {
            converged = true;
            break;
        }
        if peak > 0.0 && term.norm() <= INVARIANT_REL_TOL * peak {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
    }
    for v in partials.iter_mut() {
        *v *= scale;
    }
    let total = *partials.last().unwrap();
    (partials, total, converged)
}

/// Evaluate the series invariant compatible with the alpha class:
/// S for non-integer alpha, W for natural alpha, Q for non-positive integers.
pub fn series_invariant(p: &DcheParams, kind: SeriesKind) -> Result<SeriesInvariant> {
    let class = p.alpha_class();
    let compatible = match kind {
        SeriesKind::S => class == AlphaClass::NonInteger,
        SeriesKind::W => class.is_natural(),
        SeriesKind::Q => class == AlphaClass::NonPositiveInteger,
    };
    if !compatible {
        return Err(Error::pre(format!(
            "series {kind:?} incompatible with alpha class {class:?}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let (partial_sums, limit, converged) = match kind {
        SeriesKind::S => alternating_gamma_series(p.alpha, p.beta, p.gamma, one),
        SeriesKind::W => w_series(p.alpha, p.beta, p.gamma),
        SeriesKind::Q => {
            // Q = beta^(1-alpha) * S-form; 1 - alpha is a positive integer.
            let scale = Complex64::new(p.beta.powf(1.0 - p.alpha.re), 0.0);
            alternating_gamma_series(p.alpha, p.beta, p.gamma, scale)
        }
    };
    Ok(SeriesInvariant {
        kind,
        partial_sums,
        limit,
        converged,
    })
}

/// `(-x)^expo` for real `x > 0` on the branch `arg(-x) = +pi`, i.e.
/// `exp(expo (ln x + i pi))`; matches the singular direction `theta = pi`.
pub fn negative_real_power(x: f64, expo: Complex64) -> Complex64 {
    (expo * Complex64::new(x.ln(), PI)).exp()
}

/// The Stokes multiplier at the irregular origin:
/// `mu = 2 pi i (-beta)^(1-alpha) sum_k (-1)^k beta^k gamma^k / (k! Gamma(2+k-alpha))`.
pub fn stokes_multiplier_mu(p: &DcheParams) -> Result<Complex64> {
    if p.beta <= 0.0 {
        return Err(Error::pre("Stokes multiplier requires beta > 0"));
    }
    let one = Complex64::new(1.0, 0.0);
    let (_, s, _) = alternating_gamma_series(p.alpha, p.beta, p.gamma, one);
    Ok(two_pi_i() * negative_real_power(p.beta, one - p.alpha) * s)
}

/// The natural-alpha form `mu = 2 pi i gamma^(alpha-1) sum_n (-1)^n beta^n
/// gamma^n / (n! Gamma(alpha+n))`; coincides with `stokes_multiplier_mu` on
/// its domain.
pub fn mu_natural_form(p: &DcheParams) -> Result<Complex64> {
    if p.beta <= 0.0 {
        return Err(Error::pre("Stokes multiplier requires beta > 0"));
    }
    let a = match (p.alpha_class().is_natural(), p.alpha_integer()) {
        (true, Some(a)) => a as u32,
        _ => {
            return Err(Error::pre(
                "natural-form mu requires alpha a natural number",
            ))
        }
    };
    let (_, w, _) = w_series(p.alpha, p.beta, p.gamma);
    Ok(two_pi_i() * p.gamma.powu(a - 1) * w)
}

/// Verdict of the entire-solution (Bessel-zero) criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionClass {
    HolomorphicInCStar,
    DivergentType,
}

pub const DEFAULT_TOL_ZERO: f64 = 1e-12;

/// Does the equation possess a solution holomorphic in all of `C*`?
/// Evaluates the series governed by the alpha class (W for natural alpha,
/// otherwise the S-form) and tests it against `tol_zero` relative to the
/// largest partial sum.
pub fn entire_solution_test_with_tol(p: &DcheParams, tol_zero: f64) -> Result<SolutionClass> {
    if p.beta <= 0.0 {
        return Err(Error::pre("entire-solution test requires beta > 0"));
    }
    let one = Complex64::new(1.0, 0.0);
    let (partials, limit, _) = if p.alpha_class().is_natural() {
        w_series(p.alpha, p.beta, p.gamma)
    } else {
        alternating_gamma_series(p.alpha, p.beta, p.gamma, one)
    };
    let scale = partials
        .iter()
        .map(|z| z.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    if limit.norm() < tol_zero * scale {
        Ok(SolutionClass::HolomorphicInCStar)
    } else {
        Ok(SolutionClass::DivergentType)
    }
}

pub fn entire_solution_test(p: &DcheParams) -> Result<SolutionClass> {
    entire_solution_test_with_tol(p, DEFAULT_TOL_ZERO)
}

/// The Stokes matrix at the origin, `[[1, mu], [0, 1]]`.
pub fn stokes_matrix(p: &DcheParams) -> Result<Matrix2C> {
    Ok(Matrix2C::unipotent_upper(stokes_multiplier_mu(p)?))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::special::{bessel_j, j0_first_zero};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(alpha: f64, beta: f64, gamma: f64) -> DcheParams {
        DcheParams::new(c(alpha, 0.0), beta, c(gamma, 0.0)).unwrap()
    }

    fn assert_close(got: Complex64, want: Complex64, tol: f64) {
        let err = (got - want).norm() / (1.0 + want.norm());
        assert!(err <= tol, "got {got}, want {want}, rel err {err:e}");
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_origin(&params(4.0, 0.0, 1.0)),
            OriginKind::RegularResonant
        );
        assert_eq!(
            classify_origin(&params(2.5, 0.0, 1.0)),
            OriginKind::RegularNonresonant
        );
        assert_eq!(
            classify_origin(&params(2.5, 1.0, 1.0)),
            OriginKind::IrregularRank1
        );
    }

    #[test]
    fn alpha_classes() {
        assert_eq!(params(4.0, 0.0, 1.0).alpha_class(), AlphaClass::EvenNatural);
        assert_eq!(params(3.0, 0.0, 1.0).alpha_class(), AlphaClass::Natural);
        assert_eq!(
            params(0.0, 0.0, 1.0).alpha_class(),
            AlphaClass::NonPositiveInteger
        );
        assert_eq!(params(0.5, 0.0, 1.0).alpha_class(), AlphaClass::NonInteger);
        assert_eq!(
            DcheParams::new(c(2.0, 0.7), 0.0, c(1.0, 0.0))
                .unwrap()
                .alpha_class(),
            AlphaClass::NonInteger
        );
    }

    #[test]
    fn beta_validation() {
        assert!(DcheParams::new(c(1.0, 0.0), -0.5, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn lambda_values() {
        let g = c(0.3, 0.4);
        let p = DcheParams::new(c(2.0, 0.0), 0.0, g).unwrap();
        assert_close(lambda_coefficient(&p).unwrap(), g, 1e-15);
        let p = DcheParams::new(c(4.0, 0.0), 0.0, g).unwrap();
        assert_close(lambda_coefficient(&p).unwrap(), g * g * g / 6.0, 1e-15);
        let p = params(4.0, 0.0, 0.0);
        assert_eq!(lambda_coefficient(&p).unwrap(), c(0.0, 0.0));
        assert!(lambda_coefficient(&params(3.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn lambda_gamma_derivative() {
        // Finite difference in gamma matches (alpha-1) gamma^(alpha-2)/(alpha-1)!.
        let a = 6.0;
        let g = 1.3;
        let h = 1e-6;
        let f = |g: f64| lambda_coefficient(&params(a, 0.0, g)).unwrap().re;
        let fd = (f(g + h) - f(g - h)) / (2.0 * h);
        let want = (a - 1.0) * g.powi(4) / 120.0;
        assert!((fd - want).abs() / want.abs() <= 1e-6);
    }

    #[test]
    fn monodromy_m0_values() {
        let m = monodromy_m0(&params(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(m, Matrix2C::identity());
        let m = monodromy_m0(&params(2.0, 0.0, 1.0)).unwrap();
        assert_close(m.a12, two_pi_i(), 1e-15);
        let m = monodromy_m0(&params(4.0, 0.0, 2.0)).unwrap();
        assert_close(m.a12, two_pi_i() * (8.0 / 6.0), 1e-15);
        // Unipotent with (M - I)^2 = 0 exactly.
        let n = m.sub(&Matrix2C::identity());
        assert_eq!(n.mul(&n).max_norm(), 0.0);
    }

    #[test]
    fn series_w_trivial() {
        let p = params(2.0, 0.0, 0.0);
        let s = series_invariant(&p, SeriesKind::W).unwrap();
        assert_close(s.limit, c(1.0, 0.0), 1e-14);
        assert!(s.converged);
    }

    #[test]
    fn series_s_is_scaled_bessel() {
        // S(alpha=0.5, beta=gamma=1) = J_{1/2}(2).
        let p = params(0.5, 1.0, 1.0);
        let s = series_invariant(&p, SeriesKind::S).unwrap();
        let want = bessel_j(c(0.5, 0.0), c(2.0, 0.0)).unwrap();
        assert_close(s.limit, want, 1e-14);
    }

    #[test]
    fn series_q_trivial() {
        let p = params(0.0, 2.0, 0.0);
        let s = series_invariant(&p, SeriesKind::Q).unwrap();
        assert_close(s.limit, c(2.0, 0.0), 1e-14);
    }

    #[test]
    fn series_kind_gate() {
        assert!(series_invariant(&params(0.5, 1.0, 1.0), SeriesKind::W).is_err());
        assert!(series_invariant(&params(2.0, 1.0, 1.0), SeriesKind::Q).is_err());
        assert!(series_invariant(&params(0.0, 1.0, 1.0), SeriesKind::S).is_err());
    }

    #[test]
    fn bessel_identity_for_noninteger_alpha() {
        // S = (beta gamma)^((alpha-1)/2) J_{1-alpha}(2 sqrt(beta gamma)).
        for (a, b, g) in [(0.5, 1.0, 1.0), (1.7, 0.8, 1.3), (-0.3, 1.2, 0.6)] {
            let p = params(a, b, g);
            let s = series_invariant(&p, SeriesKind::S).unwrap().limit;
            let bg = b * g;
            let want = bg.powf((a - 1.0) / 2.0)
                * bessel_j(c(1.0 - a, 0.0), c(2.0 * bg.sqrt(), 0.0)).unwrap();
            assert_close(s, want, 1e-10);
        }
    }

    #[test]
    fn q_equals_scaled_s_form() {
        // For alpha in Z_<=0 the Q series is beta^(1-alpha) times the S-form sum.
        for a in [0i64, -1, -2] {
            let p = params(a as f64, 1.3, 0.7);
            let q = series_invariant(&p, SeriesKind::Q).unwrap().limit;
            let (_, s, _) = alternating_gamma_series(p.alpha, p.beta, p.gamma, c(1.0, 0.0));
            assert_close(q, s * p.beta.powf(1.0 - a as f64), 1e-13);
        }
    }

    #[test]
    fn mu_trivial_and_bessel_forms() {
        // gamma=0, alpha=0: mu = -2 pi i beta.
        let p = params(0.0, 1.7, 0.0);
        assert_close(stokes_multiplier_mu(&p).unwrap(), -two_pi_i() * 1.7, 1e-14);
        // alpha=1: mu = 2 pi i J_0(2 sqrt(beta gamma)).
        let p = params(1.0, 1.0, 1.0);
        let want = two_pi_i() * bessel_j(c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert_close(stokes_multiplier_mu(&p).unwrap(), want, 1e-13);
    }

    #[test]
    fn mu_reference_value() {
        // Frozen 50-digit series oracle.
        let p = params(3.0, 1.0, 0.4);
        assert_close(
            stokes_multiplier_mu(&p).unwrap(),
            c(0.0, 0.43889732507137085),
            1e-13,
        );
        assert_close(
            mu_natural_form(&p).unwrap(),
            c(0.0, 0.43889732507137085),
            1e-13,
        );
    }

    #[test]
    fn mu_forms_agree_on_natural_grid() {
        for a in 1..=6i64 {
            for b in [0.5, 1.0, 2.0] {
                for g in [c(0.3, 0.0), c(0.7, 0.2)] {
                    let p = DcheParams::new(c(a as f64, 0.0), b, g).unwrap();
                    let m1 = stokes_multiplier_mu(&p).unwrap();
                    let m2 = mu_natural_form(&p).unwrap();
                    assert!(
                        (m1 - m2).norm() <= 1e-12 * m1.norm(),
                        "a={a} b={b} g={g}: {m1} vs {m2}"
                    );
                }
            }
        }
    }

    #[test]
    fn entire_solution_at_bessel_zero() {
        let j01 = j0_first_zero();
        let bg = (j01 / 2.0) * (j01 / 2.0);
        let p = params(1.0, 1.0, bg);
        assert_eq!(
            entire_solution_test(&p).unwrap(),
            SolutionClass::HolomorphicInCStar
        );
        let mu = stokes_multiplier_mu(&p).unwrap();
        assert!(mu.norm() <= 1e-10);
        // 1% perturbation flips the verdict.
        let p = params(1.0, 1.0, bg * 1.01);
        assert_eq!(
            entire_solution_test(&p).unwrap(),
            SolutionClass::DivergentType
        );
    }

    #[test]
    fn entire_solution_divergent_cases() {
        assert_eq!(
            entire_solution_test(&params(1.0, 1.0, 1.0)).unwrap(),
            SolutionClass::DivergentType
        );
        assert_eq!(
            entire_solution_test(&params(0.5, 1.0, 0.0)).unwrap(),
            SolutionClass::DivergentType
        );
    }

    #[test]
    fn stokes_matrix_shape() {
        let p = params(0.0, 1.0, 0.0);
        let m = stokes_matrix(&p).unwrap();
        assert!(m.is_unipotent_upper(0.0));
        assert_close(m.a12, -two_pi_i(), 1e-14);
        let j01 = j0_first_zero();
        let p = params(1.0, 1.0, (j01 / 2.0) * (j01 / 2.0));
        let m = stokes_matrix(&p).unwrap();
        assert!(m.entrywise_distance(&Matrix2C::identity()) <= 1e-10);
    }
}
