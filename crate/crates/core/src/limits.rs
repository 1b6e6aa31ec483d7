//! The `sqrt(eps) -> 0` limit machinery: power-law extrapolation of eps
//! sweeps, pass/fail verdicts against the closed-form targets, and the
//! small-parameter expansion self-check.
//!
//! Every tolerance is relative to `1 + |target|`, since targets span many
//! orders of magnitude across alpha and gamma.

use crate::dche::{self, DcheParams};
use crate::error::{Error, Result};
use crate::two_pi_i;
use crate::unfold::{self, Side, UnfoldParams};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One eps sweep of an invariant with its extrapolated limit and verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub parameter: String,
    pub eps_values: Vec<f64>,
    #[serde(with = "crate::cjson::c64vec")]
    pub values: Vec<Complex64>,
    #[serde(with = "crate::cjson::c64")]
    pub extrapolated: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub target: Complex64,
    pub empirical_order: f64,
    /// Absolute tolerance on |extrapolated - target| recorded with the run.
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl SweepReport {
    pub fn abs_errors(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| (v - self.target).norm())
            .collect()
    }

    /// CSV rows `eps, re, im, abs_err` under a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,re,im,abs_err\n");
        for (e, v) in self.eps_values.iter().zip(&self.values) {
            out.push_str(&format!(
                "{e:e},{:e},{:e},{:e}\n",
                v.re,
                v.im,
                (v - self.target).norm()
            ));
        }
        out
    }

    fn check_shape(&self) -> Result<()> {
        if self.values.len() != self.eps_values.len() {
            return Err(Error::domain("sweep shape mismatch"));
        }
        for w in self.eps_values.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::domain("eps values must be strictly decreasing"));
            }
        }
        Ok(())
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub(crate) fn fit_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let xs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, b) in xs.iter().zip(&ys) {
        num += (a - mx) * (b - my);
        den += (a - mx) * (a - mx);
    }
    num / den
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Extrapolation {
    #[serde(with = "crate::cjson::c64")]
    pub limit: Complex64,
    pub empirical_order: f64,
    /// False when the power-law fit residual exceeded 10% and the last value
    /// was returned instead.
    pub fit_ok: bool,
}

/// Fit `v(eps) = L + C eps^p` on the last three points (any positive
/// decreasing eps grid; the exponent is solved from the difference ratio)
/// and Richardson-eliminate the leading term. Falls back to the last value
/// when the sequence is too irregular.
pub fn richardson_extrapolate(
    values: &[Complex64],
    eps_values: &[f64],
    order_hint: f64,
) -> Result<Extrapolation> {
    if values.len() != eps_values.len() {
        return Err(Error::domain("values/eps length mismatch"));
    }
    if values.len() < 3 {
        return Err(Error::TooFewPoints {
            need: 3,
            got: values.len(),
        });
    }
    let n = values.len();
    let (v1, v2, v3) = (values[n - 3], values[n - 2], values[n - 1]);
    let (s1, s2, s3) = (eps_values[n - 3], eps_values[n - 2], eps_values[n - 1]);
    let d12 = v1 - v2;
    let d23 = v2 - v3;
    if d23.norm() <= 1e-14 * (1.0 + v3.norm()) {
        // Sequence already converged to roundoff.
        return Ok(Extrapolation {
            limit: v3,
            empirical_order: order_hint,
            fit_ok: true,
        });
    }
    let ratio = (d12 / d23).norm();
    // Solve |s1^p - s2^p| / |s2^p - s3^p| = ratio for p by bisection.
    let g = |p: f64| (s1.powf(p) - s2.powf(p)) / (s2.powf(p) - s3.powf(p)) - ratio;
    let (mut lo, mut hi) = (0.02, 10.0);
    let p = if g(lo) * g(hi) < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    } else if order_hint > 0.0 {
        order_hint
    } else {
        return Ok(Extrapolation {
            limit: v3,
            empirical_order: f64::NAN,
            fit_ok: false,
        });
    };
    let denom = s2.powf(p) - s3.powf(p);
    let coeff = d23 / denom;
    let limit = v3 - coeff * s3.powf(p);
    // Fit residual against the earliest of the three points (and the fourth
    // from the end when present).
    let mut resid = 0.0f64;
    let upto = if n >= 4 { n - 4 } else { n - 3 };
    for i in upto..n - 2 {
        let pred = limit + coeff * eps_values[i].powf(p);
        let scale = (values[i] - limit).norm().max(1e-300);
        resid = resid.max((pred - values[i]).norm() / scale);
    }
    if resid > 0.10 {
        return Ok(Extrapolation {
            limit: v3,
            empirical_order: p,
            fit_ok: false,
        });
    }
    Ok(Extrapolation {
        limit,
        empirical_order: p,
        fit_ok: true,
    })
}

/// Relative tolerance for the catastrophic-cancellation monitor: a sweep
/// value whose estimated error is worse than half the f64 mantissa renders
/// the verdict inconclusive rather than pass/fail.
const CANCELLATION_LIMIT: f64 = 1e-8;

fn verdict_for(
    extrapolated: Complex64,
    target: Complex64,
    tolerance: f64,
    inconclusive: bool,
) -> Verdict {
    if inconclusive {
        Verdict::Inconclusive
    } else if (extrapolated - target).norm() <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Sweep of `q_R + q_L` under res1 against the closed-form log coefficient
/// `lambda = gamma^(alpha-1)/(alpha-1)!`.
pub fn check_sum_limit(p: &DcheParams, eps_values: &[f64], rel_tol: f64) -> Result<SweepReport> {
    let target = dche::lambda_coefficient(p)?;
    let mut values = Vec::with_capacity(eps_values.len());
    let mut inconclusive = false;
    for &eps in eps_values {
        let u = UnfoldParams::new(*p, eps.sqrt())?;
        let s = unfold::q_sum(&u)?;
        if s.est_rel_err > CANCELLATION_LIMIT {
            inconclusive = true;
        }
        values.push(s.value);
    }
    let ex = richardson_extrapolate(&values, eps_values, 1.0)?;
    let tolerance = rel_tol * (1.0 + target.norm());
    let report = SweepReport {
        parameter: "q_R + q_L -> lambda".into(),
        eps_values: eps_values.to_vec(),
        values,
        extrapolated: ex.limit,
        target,
        empirical_order: ex.empirical_order,
        tolerance,
        verdict: verdict_for(ex.limit, target, tolerance, inconclusive || !ex.fit_ok),
    };
    report.check_shape()?;
    Ok(report)
}

/// Divergence-sign check under res1 for real gamma > 0: `Re q_R` carries the
/// sign `-(-1)^(alpha/2)` (mirrored for `q_L`) and `|q_k|` grows like
/// `eps^(-(alpha-1)/2)` within 20%. The report stores the `q_R` sweep; the
/// target/extrapolated slots carry the expected and the two fitted growth
/// orders (`q_R` in the real part, `q_L` in the imaginary part).
pub fn check_divergence_sign(p: &DcheParams, eps_values: &[f64]) -> Result<SweepReport> {
    if !(p.gamma.im == 0.0 && p.gamma.re > 0.0) {
        return Err(Error::pre("divergence-sign check requires real gamma > 0"));
    }
    let alpha = match p.alpha_integer() {
        Some(a) if a >= 2 && a % 2 == 0 => a,
        _ => return Err(Error::pre("divergence-sign check requires alpha in 2N")),
    };
    let want_sign = -f64::powi(-1.0, (alpha / 2) as i32);
    let expected_order = -(alpha as f64 - 1.0) / 2.0;
    let mut q_r = Vec::new();
    let mut q_l = Vec::new();
    let mut signs_ok = true;
    for &eps in eps_values {
        let u = UnfoldParams::new(*p, eps.sqrt())?;
        let vr = unfold::q_side(&u, Side::R)?;
        let vl = unfold::q_side(&u, Side::L)?;
        signs_ok &= vr.re.signum() == want_sign && vl.re.signum() == -want_sign;
        q_r.push(vr);
        q_l.push(vl);
    }
    let mags_r: Vec<f64> = q_r.iter().map(|v| v.norm()).collect();
    let mags_l: Vec<f64> = q_l.iter().map(|v| v.norm()).collect();
    let fit_r = fit_log_slope(eps_values, &mags_r);
    let fit_l = fit_log_slope(eps_values, &mags_l);
    let tolerance = 0.2 * expected_order.abs();
    let orders_ok =
        (fit_r - expected_order).abs() <= tolerance && (fit_l - expected_order).abs() <= tolerance;
    let report = SweepReport {
        parameter: format!("divergence sign/order of q_R, q_L (alpha = {alpha})"),
        eps_values: eps_values.to_vec(),
        values: q_r,
        extrapolated: Complex64::new(fit_r, fit_l),
        target: Complex64::new(expected_order, expected_order),
        empirical_order: fit_r,
        tolerance,
        verdict: if signs_ok && orders_ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    };
    report.check_shape()?;
    Ok(report)
}

/// Resolve the res2 sweep grid for the given resonance indices.
fn res2_grid(p: &DcheParams, m_values: &[u32]) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let found = unfold::resonant_eps_sequence(p, m, m)?;
        out.push(found[0]);
    }
    Ok(out)
}

/// Sweep of `d_L` along the resonant eps sequence against its limit
/// `mu / (2 pi i)` (the Stokes multiplier series).
pub fn check_dl_limit(p: &DcheParams, m_values: &[u32], rel_tol: f64) -> Result<SweepReport> {
    let grid = res2_grid(p, m_values)?;
    let target = dche::stokes_multiplier_mu(p)? / two_pi_i();
    let mut eps = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for &(_, se) in &grid {
        let u = UnfoldParams::new(*p, se)?;
        values.push(unfold::d_l(&u)?);
        eps.push(se);
    }
    // Strictly decreasing in sqrt(eps).
    let mut idx: Vec<usize> = (0..eps.len()).collect();
    idx.sort_by(|&i, &j| eps[j].partial_cmp(&eps[i]).unwrap());
    let eps: Vec<f64> = idx.iter().map(|&i| eps[i]).collect();
    let values: Vec<Complex64> = idx.iter().map(|&i| values[i]).collect();
    let ex = richardson_extrapolate(&values, &eps, 2.0)?;
    let tolerance = rel_tol * (1.0 + target.norm());
    let report = SweepReport {
        parameter: "d_L -> mu / (2 pi i)".into(),
        eps_values: eps,
        values,
        extrapolated: ex.limit,
        target,
        empirical_order: ex.empirical_order,
        tolerance,
        verdict: verdict_for(ex.limit, target, tolerance, !ex.fit_ok),
    };
    report.check_shape()?;
    Ok(report)
}

/// Entrywise sweep of the unfolded Stokes matrix against the confluent one;
/// only the top-right entry is nontrivial, the others are structurally
/// (1, 0, 1).
pub fn check_stokes_limit(p: &DcheParams, m_values: &[u32], rel_tol: f64) -> Result<SweepReport> {
    let grid = res2_grid(p, m_values)?;
    let target = dche::stokes_multiplier_mu(p)?;
    let mut eps = Vec::new();
    let mut values = Vec::new();
    for &(_, se) in &grid {
        let u = UnfoldParams::new(*p, se)?;
        let st = unfold::unfolded_stokes(&u)?;
        debug_assert!(st.is_unipotent_upper(0.0));
        values.push(st.a12);
        eps.push(se);
    }
    let mut idx: Vec<usize> = (0..eps.len()).collect();
    idx.sort_by(|&i, &j| eps[j].partial_cmp(&eps[i]).unwrap());
    let eps: Vec<f64> = idx.iter().map(|&i| eps[i]).collect();
    let values: Vec<Complex64> = idx.iter().map(|&i| values[i]).collect();
    let ex = richardson_extrapolate(&values, &eps, 2.0)?;
    let tolerance = rel_tol * (1.0 + target.norm());
    let report = SweepReport {
        parameter: "unfolded Stokes top-right -> mu".into(),
        eps_values: eps,
        values,
        extrapolated: ex.limit,
        target,
        empirical_order: ex.empirical_order,
        tolerance,
        verdict: verdict_for(ex.limit, target, tolerance, !ex.fit_ok),
    };
    report.check_shape()?;
    Ok(report)
}

/// Entrywise sweep of the unfolded monodromy against the confluent
/// monodromy at the origin. The top-right entry is evaluated through the
/// paired residue sum; the remaining entries are structurally (1, 0, 1).
pub fn check_monodromy_limit(
    p: &DcheParams,
    eps_values: &[f64],
    rel_tol: f64,
) -> Result<SweepReport> {
    let m0 = dche::monodromy_m0(p)?;
    let target = m0.a12;
    let mut values = Vec::with_capacity(eps_values.len());
    let mut inconclusive = false;
    for &eps in eps_values {
        let u = UnfoldParams::new(*p, eps.sqrt())?;
        let s = unfold::q_sum(&u)?;
        if s.est_rel_err > CANCELLATION_LIMIT {
            inconclusive = true;
        }
        values.push(two_pi_i() * s.value);
    }
    // Structural entries checked once at the largest eps (cheap sanity).
    let u = UnfoldParams::new(*p, eps_values[0].sqrt())?;
    let m = unfold::unfolded_monodromy(&u)?;
    if !m.is_unipotent_upper(0.0) {
        return Err(Error::domain("unfolded monodromy lost unipotency"));
    }
    let ex = richardson_extrapolate(&values, eps_values, 1.0)?;
    let tolerance = rel_tol * (1.0 + target.norm());
    let report = SweepReport {
        parameter: "unfolded monodromy top-right -> 2 pi i lambda".into(),
        eps_values: eps_values.to_vec(),
        values,
        extrapolated: ex.limit,
        target,
        empirical_order: ex.empirical_order,
        tolerance,
        verdict: verdict_for(ex.limit, target, tolerance, inconclusive || !ex.fit_ok),
    };
    report.check_shape()?;
    Ok(report)
}

/// Comparison of `((1 -+ eps)/(1 +- eps))^(gamma/(2 sqrt(eps)))` against its
/// truncated small-`sqrt(eps)` expansion (through order 5), plus the
/// eps -> 0 limit value 1 of both factors.
#[derive(Clone, Debug, Serialize)]
pub struct EpsSeriesReport {
    pub eps: f64,
    #[serde(with = "crate::cjson::c64")]
    pub direct_minus: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub direct_plus: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub truncated_minus: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub truncated_plus: Complex64,
    pub residual_minus: f64,
    pub residual_plus: f64,
    /// `C eps^3` with `C = (1 + |gamma|)^6`.
    pub bound: f64,
    pub pass: bool,
}

pub fn eps_power_series_check(gamma: Complex64, eps: f64) -> Result<EpsSeriesReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::pre("eps must lie in (0, 1)"));
    }
    let s = eps.sqrt();
    let c = gamma / (2.0 * s);
    let direct_minus = (c * ((-eps).ln_1p() - eps.ln_1p())).exp();
    let direct_plus = (c * (eps.ln_1p() - (-eps).ln_1p())).exp();
    // exp(-+ 2 gamma (s/2 + s^5/6 + ...)) truncated at total order s^5.
    let truncated = |sign: f64| {
        let g = sign * gamma;
        let mut acc = Complex64::new(1.0, 0.0);
        let s1 = s;
        acc += g * s1;
        acc += g * g * (s * s) / 2.0;
        acc += g * g * g * (s * s * s) / 6.0;
        acc += g * g * g * g * (s * s * s * s) / 24.0;
        acc += g * g * g * g * g * (s * s * s * s * s) / 120.0;
        acc += g * (s * s * s * s * s) / 3.0;
        acc
    };
    let truncated_minus = truncated(-1.0);
    let truncated_plus = truncated(1.0);
    let residual_minus = (direct_minus - truncated_minus).norm();
    let residual_plus = (direct_plus - truncated_plus).norm();
    let bound = (1.0 + gamma.norm()).powi(6) * eps.powi(3);
    Ok(EpsSeriesReport {
        eps,
        direct_minus,
        direct_plus,
        truncated_minus,
        truncated_plus,
        residual_minus,
        residual_plus,
        bound,
        pass: residual_minus <= bound && residual_plus <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(alpha: f64, beta: f64, gamma: Complex64) -> DcheParams {
        DcheParams::new(c(alpha, 0.0), beta, gamma).unwrap()
    }

    #[test]
    fn richardson_linear_sequence() {
        let eps = [0.1, 0.01, 0.001];
        let vals: Vec<Complex64> = eps.iter().map(|&e| c(1.0 + e, 0.0)).collect();
        let ex = richardson_extrapolate(&vals, &eps, 0.0).unwrap();
        assert!((ex.limit - c(1.0, 0.0)).norm() < 1e-12);
        assert!((ex.empirical_order - 1.0).abs() < 1e-6);
    }

    #[test]
    fn richardson_half_order() {
        let g = c(0.4, 0.7);
        let eps = [1e-2f64, 1e-3, 1e-4, 1e-5];
        let vals: Vec<Complex64> = eps.iter().map(|&e| g + c(0.3, -0.1) * e.sqrt()).collect();
        let ex = richardson_extrapolate(&vals, &eps, 0.0).unwrap();
        assert!((ex.limit - g).norm() < 1e-10);
        assert!((ex.empirical_order - 0.5).abs() < 1e-5);
        assert!(ex.fit_ok);
    }

    #[test]
    fn richardson_needs_three_points() {
        assert!(matches!(
            richardson_extrapolate(&[c(1.0, 0.0), c(2.0, 0.0)], &[0.1, 0.01], 1.0),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn sum_limit_alpha2() {
        let p = params(2.0, 0.0, c(1.5, 0.0));
        let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let r = check_sum_limit(&p, &eps, 1e-8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.extrapolated - c(1.5, 0.0)).norm() <= r.tolerance);
        // Empirical order ~ 1 in eps (within 50%).
        assert!((r.empirical_order - 1.0).abs() < 0.5);
    }

    #[test]
    fn sum_limit_alpha4_and_6() {
        let g = c(1.5, 0.0);
        let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let p = params(4.0, 0.0, g);
        let r = check_sum_limit(&p, &eps, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "alpha=4: {r:?}");
        let want = g * g * g / 6.0;
        assert!((r.extrapolated - want).norm() <= 1e-6 * (1.0 + want.norm()));
        let p = params(6.0, 0.0, g);
        let r = check_sum_limit(&p, &eps, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "alpha=6: {r:?}");
        let want = g.powu(5) / 120.0;
        assert!((r.extrapolated - want).norm() <= 1e-6 * (1.0 + want.norm()));
    }

    #[test]
    fn divergence_signs() {
        for (alpha, r_positive) in [(2.0, true), (4.0, false), (6.0, true)] {
            let p = params(alpha, 0.0, c(1.0, 0.0));
            let eps = [1e-1, 1e-2, 1e-3, 1e-4];
            let r = check_divergence_sign(&p, &eps).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "alpha={alpha}");
            assert_eq!(r.values[0].re > 0.0, r_positive, "alpha={alpha}");
        }
    }

    #[test]
    fn dl_limit_sweep() {
        let p = params(0.5, 1.0, c(0.4, 0.0));
        let r = check_dl_limit(&p, &[25, 50, 100, 200], 1e-4).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        // Consistency: 2 pi i * extrapolated ~ mu.
        let mu = dche::stokes_multiplier_mu(&p).unwrap();
        assert!((two_pi_i() * r.extrapolated - mu).norm() <= 1e-4 * (1.0 + mu.norm()));
    }

    #[test]
    fn dl_limit_gamma_zero_single_term() {
        // gamma=0, alpha not an integer: target (-beta)^(1-alpha)/Gamma(2-alpha).
        let p = params(0.5, 1.0, c(0.0, 0.0));
        let r = check_dl_limit(&p, &[10, 20, 40], 1e-4).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let want = dche::negative_real_power(1.0, c(0.5, 0.0))
            * crate::special::reciprocal_gamma(c(1.5, 0.0));
        assert!((r.target - want).norm() < 1e-14);
    }

    #[test]
    fn stokes_limit_sweep() {
        let p = params(0.5, 1.0, c(0.4, 0.0));
        let r = check_stokes_limit(&p, &[25, 50, 100, 200], 1e-4).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn monodromy_limit_sweeps() {
        // gamma = 0: identity on both sides, for all eps.
        let p = params(2.0, 0.0, c(0.0, 0.0));
        let eps = [1e-2, 1e-3, 1e-4];
        let r = check_monodromy_limit(&p, &eps, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.target.norm() == 0.0);
        // alpha=2, gamma=1: top-right -> 2 pi i.
        let p = params(2.0, 0.0, c(1.0, 0.0));
        let r = check_monodromy_limit(&p, &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6], 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.extrapolated - two_pi_i()).norm() <= r.tolerance);
        // alpha=4, gamma=2: top-right -> 2 pi i * 8/6.
        let p = params(4.0, 0.0, c(2.0, 0.0));
        let r = check_monodromy_limit(&p, &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6], 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.extrapolated - two_pi_i() * (8.0 / 6.0)).norm() <= r.tolerance);
    }

    #[test]
    fn pass_verdict_is_self_consistent() {
        let p = params(4.0, 0.0, c(1.5, 0.0));
        let r = check_sum_limit(&p, &[1e-2, 1e-3, 1e-4, 1e-5], 1e-5).unwrap();
        if r.verdict == Verdict::Pass {
            assert!((r.extrapolated - r.target).norm() <= r.tolerance);
        }
    }

    #[test]
    fn eps_series_expansion() {
        // gamma = 0: both sides exactly 1.
        let r = eps_power_series_check(c(0.0, 0.0), 0.01).unwrap();
        assert_eq!(r.direct_minus, c(1.0, 0.0));
        assert_eq!(r.residual_plus, 0.0);
        assert!(r.pass);
        // gamma = 1, eps = 1e-4: residual below 1e-10.
        let r = eps_power_series_check(c(1.0, 0.0), 1e-4).unwrap();
        assert!(r.residual_minus <= 1e-10 && r.residual_plus <= 1e-10);
        assert!(r.pass);
        // eps -> 0: both direct factors -> 1.
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let r = eps_power_series_check(c(0.7, 0.2), eps).unwrap();
            let d = (r.direct_minus - c(1.0, 0.0)).norm();
            assert!(d < last);
            last = d;
        }
    }
}
