//! Borel-Laplace machinery at the irregular origin: the formal solution's
//! series data, the entire Borel-plane functions, ray Laplace sums, the
//! functional-series sum for non-integer alpha, and the lateral Stokes jump
//! that reproduces the multiplier `mu` on all three alpha classes.

use crate::dche::{AlphaClass, DcheParams, SeriesKind};
use crate::error::{Error, Result};
use crate::oracle::{integrate_real_interval, QuadratureConfig};
use crate::special::{log_gamma, reciprocal_gamma, SERIES_MAX_TERMS};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default lateral offset for rays hugging the singular direction; recorded
/// in every report that uses it.
pub const DEFAULT_LATERAL_OFFSET: f64 = 0.05;

/// Which formal series the entry carries, by alpha class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFamily {
    /// alpha not an integer
    PhiHat,
    /// alpha a natural number
    PsiHat,
    /// alpha a non-positive integer
    PhiHatNeg,
}

/// Formal-series data of the (1,2) entry of the formal fundamental matrix.
/// `coefficients[n]` multiplies `x^(n+1)`; `polynomial_part[i]` is the
/// coefficient of `(1/x)^i` in the polynomial `P` (natural alpha >= 2 only).
#[derive(Clone, Debug, Serialize)]
pub struct FormalSeries {
    pub kind: SeriesFamily,
    #[serde(with = "crate::cjson::c64vec")]
    pub coefficients: Vec<Complex64>,
    #[serde(with = "crate::cjson::c64vec")]
    pub polynomial_part: Vec<Complex64>,
    pub divergent: bool,
}

/// Maximum number of coefficients the formal-series builder will emit.
pub const FORMAL_SERIES_MAX: usize = 10_000;

/// Coefficients `h_2 .. h_max` of the entry `H_12 = sum_j h_j x^j` from the
/// defining relation `H' + (beta/x^2 - alpha/x) H = e^(gamma x)`; an
/// implementation-independent route used to cross-check the closed forms.
pub fn entry_series_by_recurrence(p: &DcheParams, max_power: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); max_power + 1];
    if max_power < 2 {
        return h;
    }
    let mut g_pow = Complex64::new(1.0, 0.0); // gamma^j / j!
    for j in 0..=(max_power - 2) {
        let hj1 = h[j + 1];
        h[j + 2] = (g_pow - (Complex64::new(j as f64 + 1.0, 0.0) - p.alpha) * hj1) / p.beta;
        g_pow *= p.gamma / (j as f64 + 1.0);
    }
    h
}

/// Partial sums of the mu-type series `sum (-1)^k beta^k gamma^k /
/// (k! Gamma(2 - alpha + k))`, up to index `n` inclusive.
fn s_partials(p: &DcheParams, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut u = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        acc += u * reciprocal_gamma(Complex64::new(2.0 + k as f64, 0.0) - p.alpha);
        out.push(acc);
        u *= -p.beta * p.gamma / (k as f64 + 1.0);
    }
    out
}

fn w_partials(p: &DcheParams, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut u = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        acc += u * reciprocal_gamma(p.alpha + k as f64);
        out.push(acc);
        u *= -p.beta * p.gamma / (k as f64 + 1.0);
    }
    out
}

/// First `n_terms` coefficients of the formal series for the given
/// parameters, by the closed forms; the polynomial part (natural alpha >= 2)
/// comes from the entry recurrence.
pub fn formal_series(p: &DcheParams, n_terms: usize) -> Result<FormalSeries> {
    if p.beta <= 0.0 {
        return Err(Error::pre("formal series requires beta > 0"));
    }
    if n_terms == 0 || n_terms > FORMAL_SERIES_MAX {
        return Err(Error::pre(format!(
            "n_terms must lie in [1, {FORMAL_SERIES_MAX}]"
        )));
    }
    let class = p.alpha_class();
    let n = n_terms - 1;
    let ln_beta = p.beta.ln();
    let mut coefficients = Vec::with_capacity(n_terms);
    let kind;
    let mut polynomial_part = Vec::new();
    match class {
        AlphaClass::NonInteger => {
            kind = SeriesFamily::PhiHat;
            let s = s_partials(p, n);
            for (i, sn) in s.iter().enumerate() {
                let lg = log_gamma(Complex64::new(2.0 + i as f64, 0.0) - p.alpha)?;
                let log_mag = lg - Complex64::new(i as f64 * ln_beta, 0.0);
                if log_mag.re > 690.0 {
                    return Err(Error::OverflowGuard {
                        log_magnitude: log_mag.re,
                    });
                }
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                coefficients.push(sign * sn * log_mag.exp());
            }
        }
        AlphaClass::Natural | AlphaClass::EvenNatural => {
            kind = SeriesFamily::PsiHat;
            let a = p.alpha_integer().expect("natural") as usize;
            let w = w_partials(p, n);
            for (i, wn) in w.iter().enumerate() {
                let log_mag = crate::special::ln_factorial(i as u64) - i as f64 * ln_beta;
                if log_mag > 690.0 {
                    return Err(Error::OverflowGuard {
                        log_magnitude: log_mag,
                    });
                }
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                coefficients.push(sign * wn * log_mag.exp());
            }
            if a >= 2 {
                // x^alpha P(1/x) covers powers x^2 .. x^alpha of the entry:
                // P coefficients p_i = h_(alpha - i), i = 0 .. alpha-2.
                let h = entry_series_by_recurrence(p, a);
                polynomial_part = (0..=(a - 2)).map(|i| h[a - i]).collect();
            }
        }
        AlphaClass::NonPositiveInteger => {
            kind = SeriesFamily::PhiHatNeg;
            let s = s_partials(p, n);
            let a_re = p.alpha.re;
            for (i, sn) in s.iter().enumerate() {
                let lg = log_gamma(Complex64::new(2.0 + i as f64, 0.0) - p.alpha)?;
                let log_mag = lg - Complex64::new((1.0 - a_re + i as f64) * ln_beta, 0.0);
                if log_mag.re > 690.0 {
                    return Err(Error::OverflowGuard {
                        log_magnitude: log_mag.re,
                    });
                }
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                // Q_n = beta^(1-alpha) S_n for integer alpha <= 0.
                coefficients.push(sign * sn * log_mag.exp() * p.beta.powf(1.0 - a_re));
            }
        }
    }
    // Divergence is decided by the governing constant series.
    let governing = match kind {
        SeriesFamily::PsiHat => crate::dche::series_invariant(p, SeriesKind::W)?,
        SeriesFamily::PhiHat => crate::dche::series_invariant(p, SeriesKind::S)?,
        SeriesFamily::PhiHatNeg => crate::dche::series_invariant(p, SeriesKind::Q)?,
    };
    let scale = governing
        .partial_sums
        .iter()
        .map(|z| z.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let divergent = governing.limit.norm() >= crate::dche::DEFAULT_TOL_ZERO * scale;
    Ok(FormalSeries {
        kind,
        coefficients,
        polynomial_part,
        divergent,
    })
}

/// Borel-plane function `v(xi) = sum_n gamma^n xi^n / (n! Gamma(alpha+n))`
/// (natural alpha).
pub fn borel_v(xi: Complex64, p: &DcheParams) -> Result<Complex64> {
    if !p.alpha_class().is_natural() {
        return Err(Error::pre("v(xi) requires alpha a natural number"));
    }
    Ok(entire_gamma_series(p.alpha, p.gamma, xi, true))
}

/// Borel-plane function `q(xi) = sum_k gamma^k xi^k / (k! Gamma(2-alpha+k))`
/// (entire for every alpha).
pub fn borel_q(xi: Complex64, p: &DcheParams) -> Complex64 {
    entire_gamma_series(p.alpha, p.gamma, xi, false)
}

fn entire_gamma_series(
    alpha: Complex64,
    gamma: Complex64,
    xi: Complex64,
    v_kind: bool,
) -> Complex64 {
    let mut u = Complex64::new(1.0, 0.0); // (gamma xi)^n / n!
    let mut acc = Complex64::new(0.0, 0.0);
    let mut small = 0u32;
    let mut peak = 0.0f64;
    for n in 0..SERIES_MAX_TERMS {
        let g_arg = if v_kind {
            alpha + n as f64
        } else {
            Complex64::new(2.0 + n as f64, 0.0) - alpha
        };
        let term = u * reciprocal_gamma(g_arg);
        acc += term;
        peak = peak.max(acc.norm()).max(term.norm());
        u *= gamma * xi / (n as f64 + 1.0);
        if u.norm() == 0.0 {
            break;
        }
        if peak > 0.0 && term.norm() <= 1e-16 * peak {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lateral {
    Plus,
    Minus,
    None,
}

/// A Laplace ray direction; `lateral` is meaningful only on the singular
/// direction `theta = pi`, where the ray is tilted by -+ the lateral offset.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RayDirection {
    pub theta: f64,
    pub lateral: Lateral,
}

impl RayDirection {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-PI < theta && theta <= PI) {
            return Err(Error::pre("theta must lie in (-pi, pi]"));
        }
        Ok(Self {
            theta,
            lateral: Lateral::None,
        })
    }

    pub fn lateral(side: Lateral) -> Self {
        Self {
            theta: PI,
            lateral: side,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(-PI < self.theta && self.theta <= PI) {
            return Err(Error::pre("theta must lie in (-pi, pi]"));
        }
        if self.lateral != Lateral::None && (self.theta - PI).abs() > 1e-12 {
            return Err(Error::pre("lateral rays only exist at theta = pi"));
        }
        Ok(())
    }

    /// The actual ray angle, after lateral tilting.
    pub fn effective_theta(&self, lateral_offset: f64) -> f64 {
        match self.lateral {
            Lateral::None => self.theta,
            Lateral::Plus => PI + lateral_offset,
            Lateral::Minus => PI - lateral_offset,
        }
    }
}

/// Disc-of-holomorphy constant `c = Re(e^(i theta)/x)`; the Laplace sums
/// exist for `c > |gamma|`.
fn disc_margin(x: Complex64, theta: f64, gamma: Complex64) -> Result<f64> {
    let c = (Complex64::new(0.0, theta).exp() / x).re;
    if c <= gamma.norm() * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::domain(format!(
            "x = {x} outside the Laplace disc: Re(e^(i theta)/x) = {c} <= |gamma| = {}",
            gamma.norm()
        )));
    }
    Ok(c)
}

fn ray_cutoff(c: f64, gamma_norm: f64, poly_order: f64) -> f64 {
    let rate = c - gamma_norm;
    let mut t = 45.0 / rate;
    t = (45.0 + poly_order.max(0.0) * t.max(2.0).ln()) / rate;
    t.max(4.0)
}

fn ray_breaks(beta: f64, t_max: f64, lateral: bool, offset: f64) -> Vec<f64> {
    let mut b = vec![0.5 * beta, beta, 2.0 * beta];
    if lateral {
        let d = beta * offset.sin();
        b.extend_from_slice(&[beta - 3.0 * d, beta - d, beta + d, beta + 3.0 * d]);
    }
    b.retain(|&t| t > 0.0 && t < t_max);
    b
}

/// Ray Laplace sum of the formal series: `psi_theta` for natural alpha,
/// `phi_theta` for non-positive integer alpha. For non-integer alpha use
/// [`varphi_sum`].
pub fn laplace_sum(
    p: &DcheParams,
    x: Complex64,
    dir: RayDirection,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    laplace_sum_with_offset(p, x, dir, DEFAULT_LATERAL_OFFSET, cfg)
}

pub fn laplace_sum_with_offset(
    p: &DcheParams,
    x: Complex64,
    dir: RayDirection,
    lateral_offset: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    dir.validate()?;
    if p.beta <= 0.0 {
        return Err(Error::pre("Laplace sums require beta > 0"));
    }
    let theta = dir.effective_theta(lateral_offset);
    if dir.lateral == Lateral::None && (theta - PI).abs() < 1e-12 {
        return Err(Error::domain(
            "theta = pi is the singular direction; use a lateral ray",
        ));
    }
    let c = disc_margin(x, theta, p.gamma)?;
    let e = Complex64::new(0.0, theta).exp();
    let beta = p.beta;
    let lateral = dir.lateral != Lateral::None;
    match p.alpha_class() {
        AlphaClass::Natural | AlphaClass::EvenNatural => {
            let t_max = ray_cutoff(c, p.gamma.norm(), 0.0);
            let f = |t: f64| {
                let xi = t * e;
                borel_v(xi, p).expect("alpha checked") * (-xi / x).exp() / (xi + beta) * e
            };
            let breaks = ray_breaks(beta, t_max, lateral, lateral_offset);
            Ok(beta * integrate_real_interval(f, 0.0, t_max, &breaks, cfg)?)
        }
        AlphaClass::NonPositiveInteger => {
            let k = (1.0 - p.alpha.re).round() as i32; // 1 - alpha >= 1
            let t_max = ray_cutoff(c, p.gamma.norm(), k as f64);
            let f = |t: f64| {
                let xi = t * e;
                xi.powi(k) * borel_q(xi, p) * (-xi / x).exp() / (xi + beta) * e
            };
            let breaks = ray_breaks(beta, t_max, lateral, lateral_offset);
            let integral = integrate_real_interval(f, 0.0, t_max, &breaks, cfg)?;
            Ok(beta * x.powi(-k) * integral)
        }
        AlphaClass::NonInteger => Err(Error::pre(
            "laplace_sum handles integer alpha classes; use varphi_sum for non-integer alpha",
        )),
    }
}

/// The functional series for non-integer alpha:
/// `varphi_theta(x) = sum_k gamma^k x^k / k! * integral_0^(inf e^(i theta))
/// e^(-xi/x) (1 + xi/beta)^(alpha-2-k) d xi`.
pub fn varphi_sum(
    p: &DcheParams,
    x: Complex64,
    dir: RayDirection,
    k_cap: usize,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    varphi_sum_with_offset(p, x, dir, k_cap, DEFAULT_LATERAL_OFFSET, cfg)
}

pub fn varphi_sum_with_offset(
    p: &DcheParams,
    x: Complex64,
    dir: RayDirection,
    k_cap: usize,
    lateral_offset: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    dir.validate()?;
    if p.alpha_class() != AlphaClass::NonInteger {
        return Err(Error::pre("varphi_sum requires non-integer alpha"));
    }
    if p.beta <= 0.0 {
        return Err(Error::pre("varphi_sum requires beta > 0"));
    }
    if k_cap == 0 {
        return Err(Error::pre("k_cap must be at least 1"));
    }
    let theta = dir.effective_theta(lateral_offset);
    let c = disc_margin(x, theta, p.gamma)?;
    let e = Complex64::new(0.0, theta).exp();
    let beta = p.beta;
    let lateral = dir.lateral != Lateral::None;
    let t_max = ray_cutoff(c, p.gamma.norm(), 0.0);
    let breaks = ray_breaks(beta, t_max, lateral, lateral_offset);

    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut pref = Complex64::new(1.0, 0.0); // gamma^k x^k / k!
    let mut small = 0u32;
    for k in 0..k_cap {
        let expo = p.alpha - (2.0 + k as f64);
        let f = |t: f64| {
            let xi = t * e;
            ((-xi / x) + expo * (1.0 + xi / beta).ln()).exp() * e
        };
        // The k-th integral only needs absolute accuracy relative to the
        // final sum divided by its own prefactor: near-pole lateral peaks
        // grow like (sin delta)^(-k) while the prefactor shrinks as
        // gamma^k x^k / k!, so a flat relative target would be both
        // unreachable (error-estimate floor) and wasted effort.
        let mut cfg_k = *cfg;
        if pref.norm() > 0.0 {
            cfg_k.abs_tol = cfg
                .abs_tol
                .max(0.1 * cfg.rel_tol * scale.max(x.norm()) / pref.norm());
        }
        let integral = integrate_real_interval(f, 0.0, t_max, &breaks, &cfg_k)?;
        let term = pref * integral;
        acc += term;
        scale = scale.max(acc.norm()).max(term.norm());
        if term.norm() <= 1e-16 * scale {
            small += 1;
            if small >= 3 {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
        pref *= p.gamma * x / (k as f64 + 1.0);
    }
    Err(Error::SeriesCap { max_terms: k_cap })
}

/// Relative spread allowed across sample points in the jump evaluation.
const JUMP_SPREAD_REL_TOL: f64 = 1e-6;

/// The Stokes multiplier recovered numerically from the lateral Laplace
/// sums across the singular direction, with the class-dependent prefactor;
/// evaluated at `x`, `0.85 x` and `0.7 x` and required to be x-independent.
pub fn stokes_jump(
    p: &DcheParams,
    x: Complex64,
    delta_lateral: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if p.beta <= 0.0 {
        return Err(Error::pre("Stokes jump requires beta > 0"));
    }
    if !(delta_lateral > 0.0 && delta_lateral <= 0.2) {
        return Err(Error::pre("delta_lateral must lie in (0, 0.2]"));
    }
    let class = p.alpha_class();
    let samples = [x, x * 0.85, x * 0.7];
    let mut mus = Vec::with_capacity(samples.len());
    for &xs in &samples {
        let minus = RayDirection::lateral(Lateral::Minus);
        let plus = RayDirection::lateral(Lateral::Plus);
        let (f_minus, f_plus) = match class {
            AlphaClass::NonInteger => (
                varphi_sum_with_offset(p, xs, minus, 256, delta_lateral, cfg)?,
                varphi_sum_with_offset(p, xs, plus, 256, delta_lateral, cfg)?,
            ),
            _ => (
                laplace_sum_with_offset(p, xs, minus, delta_lateral, cfg)?,
                laplace_sum_with_offset(p, xs, plus, delta_lateral, cfg)?,
            ),
        };
        let jump = f_minus - f_plus;
        let mu = match class {
            AlphaClass::Natural | AlphaClass::EvenNatural => {
                let a = p.alpha_integer().unwrap() as u32;
                p.gamma.powu(a - 1) * (-p.beta / xs).exp() / p.beta * jump
            }
            AlphaClass::NonPositiveInteger => {
                let k = (1.0 - p.alpha.re).round() as i32;
                xs.powi(k) * (-p.beta / xs).exp() / p.beta * jump
            }
            AlphaClass::NonInteger => {
                // x^(1-alpha) on arg(x) in (-pi, pi], continued laterally.
                ((Complex64::new(1.0, 0.0) - p.alpha) * xs.ln()).exp() * (-p.beta / xs).exp()
                    / p.beta
                    * jump
            }
        };
        mus.push(mu);
    }
    let mean = mus.iter().sum::<Complex64>() / mus.len() as f64;
    let spread = mus.iter().map(|m| (m - mean).norm()).fold(0.0f64, f64::max);
    let tol = JUMP_SPREAD_REL_TOL * (1.0 + mean.norm());
    if spread > tol {
        return Err(Error::XDependent { spread, tol });
    }
    Ok(mean)
}

/// Gevrey-1 diagnostic of one truncation sweep at a fixed point.
#[derive(Clone, Debug, Serialize)]
pub struct GevreyPoint {
    pub x: f64,
    pub errors: Vec<f64>,
    pub optimal_n: usize,
    pub optimal_err: f64,
    /// `exp(-beta/|x|)`, the expected optimal-truncation scale.
    pub reference_scale: f64,
    pub fitted_c: f64,
    pub fitted_a: f64,
    /// Optimal error within a factor 10 of the reference scale.
    pub gevrey_like: bool,
    /// Errors still decreasing at the last truncation order (convergent
    /// series regime).
    pub convergent_like: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GevreyReport {
    pub points: Vec<GevreyPoint>,
    pub lateral_offset: f64,
}

/// Compare the Laplace sum at `theta` against truncations of the formal
/// series, fitting the Gevrey-1 envelope `C A^N N! |x|^(N+1)` and checking
/// the error at the optimal truncation `N* ~ beta/|x|` against
/// `exp(-beta/|x|)`.
pub fn gevrey_check(
    p: &DcheParams,
    x_list: &[f64],
    dir: RayDirection,
    n_max: usize,
    cfg: &QuadratureConfig,
) -> Result<GevreyReport> {
    if x_list.is_empty() {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    let class = p.alpha_class();
    if class == AlphaClass::NonInteger {
        return Err(Error::pre("gevrey_check handles integer alpha classes"));
    }
    let series = formal_series(p, n_max.max(2))?;
    let mut points = Vec::with_capacity(x_list.len());
    for &xr in x_list {
        if xr <= 0.0 {
            return Err(Error::pre("x_list must be positive reals"));
        }
        let x = Complex64::new(xr, 0.0);
        let full = laplace_sum(p, x, dir, cfg)?;
        // Truncations of the series part the Laplace integral resums.
        let mut errors = Vec::with_capacity(n_max);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut xp = x; // x^(n+1)
        for n in 0..n_max {
            acc += series.coefficients[n] * xp;
            xp *= x;
            errors.push((full - acc).norm());
        }
        let (optimal_n, optimal_err) = errors
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, &e)| (i + 1, e))
            .unwrap();
        let reference_scale = (-p.beta / xr).exp();
        // Least-squares fit of ln E_N = ln C + N ln A + ln N! + (N+1) ln x
        // over the pre-optimal range.
        let upto = optimal_n.saturating_sub(1).max(2);
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        let mut cnt = 0.0;
        for n in 1..=upto {
            let y = errors[n - 1].max(1e-300).ln()
                - crate::special::ln_factorial(n as u64)
                - (n as f64 + 1.0) * xr.ln();
            sx += n as f64;
            sy += y;
            sxx += (n as f64) * (n as f64);
            sxy += (n as f64) * y;
            cnt += 1.0;
        }
        let (ln_a, ln_c) = if cnt >= 2.0 {
            let la = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            (la, (sy - la * sx) / cnt)
        } else {
            (f64::NAN, f64::NAN)
        };
        let ratio = optimal_err / reference_scale;
        let convergent_like = *errors.last().unwrap() < reference_scale * 0.1;
        points.push(GevreyPoint {
            x: xr,
            errors,
            optimal_n,
            optimal_err,
            reference_scale,
            fitted_c: ln_c.exp(),
            fitted_a: ln_a.exp(),
            gevrey_like: (0.1..=10.0).contains(&ratio),
            convergent_like,
        });
    }
    Ok(GevreyReport {
        points,
        lateral_offset: DEFAULT_LATERAL_OFFSET,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::dche;
    use crate::special::bessel_j;

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
    fn formal_series_psi_leading_coefficient() {
        // psi-hat coefficient n=0 is W_0 = 1/Gamma(alpha).
        let p = params(3.0, 1.0, 0.4);
        let s = formal_series(&p, 4).unwrap();
        assert_eq!(s.kind, SeriesFamily::PsiHat);
        assert_close(s.coefficients[0], c(0.5, 0.0), 1e-15);
        assert!(s.divergent);
    }

    #[test]
    fn formal_series_euler_type() {
        // gamma=0, alpha=1: coefficients (-1)^n n!/beta^n.
        let p = params(1.0, 2.0, 0.0);
        let s = formal_series(&p, 6).unwrap();
        for (n, &a) in s.coefficients.iter().enumerate() {
            let mut want = 1.0;
            for j in 1..=n {
                want *= j as f64 / 2.0;
            }
            if n % 2 == 1 {
                want = -want;
            }
            assert_close(a, c(want, 0.0), 1e-14);
        }
        assert!(s.polynomial_part.is_empty());
    }

    #[test]
    fn formal_series_matches_entry_recurrence() {
        // The closed forms reproduce the unique solution of the entry
        // relation, for all three alpha classes.
        for (alpha, beta, gamma) in [
            (0.5, 1.0, 0.3),
            (3.0, 0.8, 0.6),
            (0.0, 1.2, 0.5),
            (-2.0, 1.0, 0.7),
        ] {
            let p = params(alpha, beta, gamma);
            let s = formal_series(&p, 8).unwrap();
            let a_int = p.alpha_integer();
            let offset = match s.kind {
                SeriesFamily::PsiHat => a_int.unwrap() as usize + 1,
                _ => 2,
            };
            let h = entry_series_by_recurrence(&p, offset + 8);
            for n in 0..6 {
                let from_recurrence = h[offset + n] * beta;
                let mut closed = s.coefficients[n];
                if s.kind == SeriesFamily::PsiHat {
                    let a = a_int.unwrap() as u32;
                    closed *= p.gamma.powu(a - 1);
                }
                assert_close(from_recurrence, closed, 1e-12);
            }
            // The polynomial part always ends with p_(alpha-2) = h_2 = 1/beta.
            if s.kind == SeriesFamily::PsiHat && a_int.unwrap() >= 2 {
                assert_close(
                    *s.polynomial_part.last().unwrap(),
                    c(1.0 / beta, 0.0),
                    1e-14,
                );
            }
        }
    }

    #[test]
    fn formal_series_convergent_at_s_zero() {
        // Non-integer alpha: S vanishes when J_{1-alpha}(2 sqrt(beta gamma))
        // does; for alpha = 1/2 that is sin(2 sqrt(beta gamma)) = 0.
        let bg = std::f64::consts::PI * std::f64::consts::PI / 4.0;
        let p = params(0.5, 1.0, bg);
        let s = formal_series(&p, 8).unwrap();
        assert_eq!(s.kind, SeriesFamily::PhiHat);
        assert!(!s.divergent);
        let p2 = params(0.5, 1.0, bg * 1.05);
        assert!(formal_series(&p2, 8).unwrap().divergent);
    }

    #[test]
    fn formal_series_convergent_at_bessel_zero() {
        let j01 = crate::special::j0_first_zero();
        let p = params(1.0, 1.0, (j01 / 2.0) * (j01 / 2.0));
        let s = formal_series(&p, 10).unwrap();
        assert!(!s.divergent);
        // Coefficients are summable: W_n -> 0, so a_n/n! -> 0.
        let tail = s.coefficients[9].norm() / crate::special::ln_factorial(9).exp();
        assert!(tail < 1e-3);
    }

    #[test]
    fn borel_values() {
        let p = params(3.0, 1.0, 0.4);
        assert_close(borel_v(c(0.0, 0.0), &p).unwrap(), c(0.5, 0.0), 1e-14);
        // mu = 2 pi i gamma^(alpha-1) v(-beta).
        let v = borel_v(c(-1.0, 0.0), &p).unwrap();
        let mu = dche::stokes_multiplier_mu(&p).unwrap();
        assert_close(crate::two_pi_i() * p.gamma.powu(2) * v, mu, 1e-13);
        // alpha=1: v(xi) = sum (gamma xi)^n/(n!)^2 = J-type series; check a
        // Bessel value: v(xi)|_{gamma xi = -y^2/4} = J_0(y).
        let p = params(1.0, 1.0, 1.0);
        let y = 1.7f64;
        let v = borel_v(c(-y * y / 4.0, 0.0), &p).unwrap();
        assert_close(v, bessel_j(c(0.0, 0.0), c(y, 0.0)).unwrap(), 1e-13);
    }

    #[test]
    fn borel_q_values() {
        let p = params(0.0, 1.0, 0.4);
        assert_close(borel_q(c(0.0, 0.0), &p), c(1.0, 0.0), 1e-14);
        // mu = 2 pi i (-beta)^(1-alpha) q(-beta).
        let q = borel_q(c(-1.0, 0.0), &p);
        let mu = dche::stokes_multiplier_mu(&p).unwrap();
        assert_close(
            crate::two_pi_i() * dche::negative_real_power(1.0, c(1.0, 0.0)) * q,
            mu,
            1e-13,
        );
        // gamma = 0: constant 1/Gamma(2-alpha).
        let p = params(-1.0, 1.0, 0.0);
        assert_close(
            borel_q(c(3.3, -1.1), &p),
            crate::special::reciprocal_gamma(c(3.0, 0.0)),
            1e-14,
        );
    }

    #[test]
    fn laplace_reference_values() {
        let cfg = QuadratureConfig::with_rel_tol(1e-12);
        // Frozen: psi_0(0.2) for alpha=1, beta=1, gamma=0 (E_1 identity).
        let p = params(1.0, 1.0, 0.0);
        let dir = RayDirection::new(0.0).unwrap();
        let v = laplace_sum(&p, c(0.2, 0.0), dir, &cfg).unwrap();
        assert_close(v, c(0.17042217628473220, 0.0), 1e-12);
        // Frozen: psi_0(0.15) for alpha=3, beta=1, gamma=0.4.
        let p = params(3.0, 1.0, 0.4);
        let v = laplace_sum(&p, c(0.15, 0.0), dir, &cfg).unwrap();
        assert_close(v, c(0.06734177388170828, 0.0), 1e-11);
    }

    #[test]
    fn laplace_leading_asymptotics() {
        // psi_theta(x)/x -> 1/Gamma(alpha) as x -> 0+.
        let p = params(3.0, 1.0, 0.4);
        let dir = RayDirection::new(0.0).unwrap();
        let x = c(1e-3, 0.0);
        let v = laplace_sum(&p, x, dir, &QuadratureConfig::default()).unwrap();
        assert!((v / x - c(0.5, 0.0)).norm() < 2e-3);
    }

    #[test]
    fn laplace_disc_is_enforced() {
        let p = params(3.0, 1.0, 0.4);
        let dir = RayDirection::new(0.0).unwrap();
        // Re(1/x) = 0.25 < |gamma| = 0.4: outside the disc.
        assert!(matches!(
            laplace_sum(&p, c(4.0, 0.0), dir, &QuadratureConfig::default()),
            Err(Error::Domain(_))
        ));
        // Singular direction without laterality.
        assert!(laplace_sum(
            &p,
            c(-0.2, 0.0),
            RayDirection::new(PI).unwrap(),
            &QuadratureConfig::default()
        )
        .is_err());
    }

    #[test]
    fn rays_on_same_side_agree() {
        let p = params(3.0, 1.0, 0.4);
        let cfg = QuadratureConfig::with_rel_tol(1e-12);
        let x = c(0.12, 0.05);
        let v1 = laplace_sum(&p, x, RayDirection::new(0.3).unwrap(), &cfg).unwrap();
        let v2 = laplace_sum(&p, x, RayDirection::new(0.5).unwrap(), &cfg).unwrap();
        assert!((v1 - v2).norm() <= 1e-10 * (1.0 + v1.norm()));
    }

    #[test]
    fn varphi_reference_value() {
        // Frozen: varphi_0(0.08) for alpha=0.5, beta=1, gamma=0.3.
        let p = params(0.5, 1.0, 0.3);
        let cfg = QuadratureConfig::with_rel_tol(1e-12);
        let dir = RayDirection::new(0.0).unwrap();
        let v = varphi_sum(&p, c(0.08, 0.0), dir, 64, &cfg).unwrap();
        assert_close(v, c(0.073553527997384804, 0.0), 1e-11);
        // gamma = 0: single k=0 term.
        let p0 = params(0.5, 1.0, 0.0);
        let v0 = varphi_sum(&p0, c(0.08, 0.0), dir, 8, &cfg).unwrap();
        let expo = p0.alpha - 2.0;
        let direct = integrate_real_interval(
            |t| ((-t / 0.08) + expo * (1.0f64 + t).ln()).exp(),
            0.0,
            6.0,
            &[1.0, 2.0],
            &cfg,
        )
        .unwrap();
        assert_close(v0, direct, 1e-11);
    }

    #[test]
    fn varphi_matches_series_asymptotics() {
        // At small x, varphi matches the first orders of the formal series
        // sum (-1)^n S_n Gamma(2-alpha+n) x^(n+1) / beta^n.
        let p = params(0.5, 1.0, 0.3);
        let cfg = QuadratureConfig::with_rel_tol(1e-13);
        let x = c(1e-3, 0.0);
        let v = varphi_sum(&p, x, RayDirection::new(0.0).unwrap(), 64, &cfg).unwrap();
        let series = formal_series(&p, 6).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut xp = x;
        for n in 0..5 {
            acc += series.coefficients[n] * xp;
            xp *= x;
        }
        assert!((v - acc).norm() <= 1e-14 + series.coefficients[5].norm() * xp.norm() * 2.0);
    }

    #[test]
    fn stokes_jump_all_three_classes() {
        let cfg = QuadratureConfig::with_rel_tol(1e-10);
        for (alpha, beta, gamma, x) in [
            (3.0, 1.0, 0.4, c(-0.35, 0.0)),
            (0.0, 1.0, 0.4, c(-0.35, 0.0)),
            (0.5, 1.0, 0.3, c(-0.35, 0.0)),
        ] {
            let p = params(alpha, beta, gamma);
            let mu_num = stokes_jump(&p, x, DEFAULT_LATERAL_OFFSET, &cfg).unwrap();
            let mu = dche::stokes_multiplier_mu(&p).unwrap();
            assert!(
                (mu_num - mu).norm() <= 1e-6 * (1.0 + mu.norm()),
                "alpha={alpha}: {mu_num} vs {mu}"
            );
        }
    }

    #[test]
    fn stokes_jump_trivial_case() {
        // gamma=0, alpha=1: mu = 2 pi i.
        let p = params(1.0, 1.0, 0.0);
        let cfg = QuadratureConfig::with_rel_tol(1e-10);
        let mu = stokes_jump(&p, c(-0.3, 0.0), 0.05, &cfg).unwrap();
        assert_close(mu, crate::two_pi_i(), 1e-8);
    }

    #[test]
    fn gevrey_euler_optimal_truncation() {
        // Euler-type series at x = 0.05: optimal N ~ beta/x = 20, error ~
        // e^(-20) within a factor of 10.
        let p = params(1.0, 1.0, 0.0);
        let cfg = QuadratureConfig::with_rel_tol(1e-13);
        let rep = gevrey_check(&p, &[0.05], RayDirection::new(0.0).unwrap(), 40, &cfg).unwrap();
        let pt = &rep.points[0];
        assert!(
            pt.gevrey_like,
            "ratio = {}",
            pt.optimal_err / pt.reference_scale
        );
        assert!((pt.optimal_n as f64 - 20.0).abs() <= 4.0);
        // Leading truncation: E_1 ~ |a_1| x^2.
        let series = formal_series(&p, 3).unwrap();
        let expect = series.coefficients[1].norm() * 0.05f64.powi(2);
        assert!((pt.errors[0] - expect).abs() <= 0.3 * expect);
    }

    #[test]
    fn gevrey_convergent_case() {
        let j01 = crate::special::j0_first_zero();
        let p = params(1.0, 1.0, (j01 / 2.0) * (j01 / 2.0));
        let cfg = QuadratureConfig::with_rel_tol(1e-13);
        let rep = gevrey_check(&p, &[0.05], RayDirection::new(0.0).unwrap(), 30, &cfg).unwrap();
        let pt = &rep.points[0];
        assert!(pt.convergent_like, "errors: {:?}", &pt.errors[25..]);
    }
}
