//! Contour residues, loop continuation of the fundamental matrix, solution
//! values along paths, and the confluence probe.

use super::integrand::{BranchedIntegrand, DcheW2Prime, UnfoldedW2Prime};
use super::path::ComplexPath;
use super::quad::{
    integrate_along_path_seeded, integrate_real_interval, EndpointHandling, QuadratureConfig,
};
use crate::dche::DcheParams;
use crate::error::{Error, Result};
use crate::matrix::Matrix2C;
use crate::two_pi_i;
use crate::unfold::{singular_points, ResonanceCase, UnfoldParams};
use num_complex::Complex64;
use serde::Serialize;

/// `(1/2 pi i) * contour integral` of `f` around a circle at `center`. The
/// radius is shrunk to half the distance to the nearest other branch point.
/// The integrand must return to its starting value after one turn (an
/// integer-exponent pole); a mismatch reports a branch point.
pub fn residue_via_contour(
    f: &dyn BranchedIntegrand,
    center: Complex64,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if radius <= 0.0 {
        return Err(Error::pre("residue contour radius must be positive"));
    }
    let mut r = radius;
    for bp in f.branch_points() {
        let d = (bp - center).norm();
        if d > 1e-12 {
            r = r.min(0.5 * d);
        }
    }
    let path = ComplexPath::circle(center, r, 1);
    let out = integrate_along_path_seeded(f, &path, cfg, None)?;
    let start = center + r;
    let v0 = f.eval(start, &out.start_args);
    let v1 = f.eval(start, &out.end_args);
    let mismatch = (v1 - v0).norm() / v0.norm().max(f64::MIN_POSITIVE);
    if mismatch > (50.0 * cfg.rel_tol).max(1e-8) {
        return Err(Error::BranchPointDetected { mismatch });
    }
    Ok(out.value / two_pi_i())
}

/// Residue of `w_2'(., eps)` at the resonant singularity `x_L` under res2,
/// by a contour homotopic to the small circle: an outer circle `|z| = R0`
/// plus a cut along the positive real axis through the branch point `x_R`,
/// where the continuation factor after one turn around `x_R` is
/// `exp(-2 pi i alpha)`. The outer pieces keep the integrand at moderate
/// size, where a direct small circle around a pole of order `m` would
/// cancel ~`m log m` digits.
pub fn residue_left_split_contour(
    u: &UnfoldParams,
    outer_radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let m = match u.resonance_case() {
        ResonanceCase::Res2 { m, .. } => m,
        other => {
            return Err(Error::pre(format!(
                "split-contour residue requires res2 (got {other:?})"
            )))
        }
    };
    let se = u.sqrt_eps;
    if !(outer_radius >= 3.0 * se && outer_radius <= 0.5 / se) {
        return Err(Error::pre(format!(
            "outer radius {outer_radius} must lie in [3 sqrt(eps), 0.5/sqrt(eps)]"
        )));
    }
    let exponent_at_cut = m as f64 - u.base.alpha.re;
    if exponent_at_cut <= -0.5 {
        return Err(Error::pre(
            "cut integrand too singular at x_R (m - alpha <= -1/2)",
        ));
    }
    let f = UnfoldedW2Prime { u: *u };

    // Outer circle, counterclockwise from z = R0 on the upper side of the cut.
    let circle = ComplexPath::circle(Complex64::new(0.0, 0.0), outer_radius, 1);
    let i_big = integrate_along_path_seeded(&f, &circle, cfg, None)?.value;

    // Cut integral on the principal branch from x_R to R0.
    let cut = |t: f64| f.eval(Complex64::new(t, 0.0), &[0.0, 0.0]);
    let i_cut = if exponent_at_cut >= 2.0 {
        let mut breaks = Vec::new();
        let mut t = 2.0 * se;
        while t < outer_radius {
            breaks.push(t);
            t *= 2.0;
        }
        integrate_real_interval(cut, se, outer_radius, &breaks, cfg)?
    } else {
        // Algebraic endpoint: substitute t = se + s^2.
        let s_max = (outer_radius - se).sqrt();
        let g = |s: f64| cut(se + s * s) * Complex64::new(2.0 * s, 0.0);
        let breaks: Vec<f64> = (1..6).map(|i| s_max * (se.powf(0.2)).powi(i)).collect();
        integrate_real_interval(g, 0.0, s_max, &breaks, cfg)?
    };

    let branch_factor = (-two_pi_i() * u.base.alpha).exp();
    Ok((i_big + (Complex64::new(1.0, 0.0) - branch_factor) * i_cut) / two_pi_i())
}

/// A closed loop around `center` starting and ending at `base`: straight run
/// to the circle of the given radius, one positive turn, straight run back.
pub fn loop_around(base: Complex64, center: Complex64, radius: f64) -> ComplexPath {
    let dir = (base - center) / (base - center).norm();
    let entry = center + radius * dir;
    let start_angle = dir.arg();
    ComplexPath::Composite {
        pieces: vec![
            ComplexPath::polyline(vec![base, entry]),
            ComplexPath::Circle {
                center,
                radius,
                turns: 1,
                orientation: super::path::Orientation::Ccw,
                start_angle,
            },
            ComplexPath::polyline(vec![entry, base]),
        ],
    }
}

/// Analytic continuation of the fundamental matrix `[[1, w_2], [0, w_2']]`
/// around a closed loop. The first column is constant, so the monodromy is
/// `[[1, D], [0, m22]]` with `D` the loop integral of `w_2'` and `m22` the
/// multiplicative factor picked up by `w_2'`; under res1 the exponents are
/// integers and `m22 = 1`.
pub fn numeric_monodromy_loop(
    u: &UnfoldParams,
    path: &ComplexPath,
    cfg: &QuadratureConfig,
) -> Result<Matrix2C> {
    if !path.is_closed()? {
        return Err(Error::pre("monodromy loop must be closed"));
    }
    if u.resonance_case() != ResonanceCase::Res1 {
        return Err(Error::pre("loop monodromy implemented for res1"));
    }
    let f = UnfoldedW2Prime { u: *u };
    let out = integrate_along_path_seeded(&f, path, cfg, None)?;
    let start = path.start()?;
    let m22 = f.eval(start, &out.end_args) / f.eval(start, &out.start_args);
    Ok(Matrix2C::new(
        Complex64::new(1.0, 0.0),
        out.value,
        Complex64::new(0.0, 0.0),
        m22,
    ))
}

fn check_path_endpoints(
    path: &ComplexPath,
    base: Complex64,
    x: Complex64,
    scale: f64,
) -> Result<()> {
    let start = path.start()?;
    let end = path.end()?;
    if (start - base).norm() > 1e-9 * scale {
        return Err(Error::pre(format!(
            "path must start at the prescribed base point {base}, starts at {start}"
        )));
    }
    if (end - x).norm() > 1e-9 * scale {
        return Err(Error::pre(format!(
            "path must end at x = {x}, ends at {end}"
        )));
    }
    Ok(())
}

/// `w_2(x, 0) = integral of w_2'` along the given path from the base point
/// (1 for beta = 0; 0 approached along the positive reals for beta > 0, via
/// the substitution z = beta/t which removes the essential singularity).
pub fn w2_value_dche(
    p: &DcheParams,
    x: Complex64,
    path: &ComplexPath,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let f = DcheW2Prime { p: *p };
    if p.beta == 0.0 {
        check_path_endpoints(path, Complex64::new(1.0, 0.0), x, 1.0)?;
        return Ok(integrate_along_path_seeded(&f, path, cfg, None)?.value);
    }
    // beta > 0: base point 0.
    if cfg.endpoint_singularity_handling != EndpointHandling::AlgebraicWeakening {
        return Err(Error::pre(
            "base point 0 with beta > 0 needs endpoint_singularity_handling = algebraic-weakening",
        ));
    }
    check_path_endpoints(path, Complex64::new(0.0, 0.0), x, 1.0)?;
    let pieces_json = path.pieces()?;
    let first = pieces_json[0];
    let (a0, b0) = (first.start(), first.end());
    if a0.im != 0.0 || b0.im != 0.0 || b0.re <= 0.0 {
        return Err(Error::pre(
            "first piece must run from 0 along the positive real axis",
        ));
    }
    let p1 = b0.re;
    // integral_0^p1 z^(-alpha) e^(-beta/z + gamma z) dz with z = beta/t.
    let beta = p.beta;
    let alpha = p.alpha;
    let gamma = p.gamma;
    let t_lo = beta / p1;
    let t_hi = t_lo + 60.0 + 10.0 * (1.0 + alpha.re.abs());
    let g = |t: f64| {
        let lnz = Complex64::new((beta / t).ln(), 0.0);
        ((-alpha + 2.0) * lnz - t + gamma * (beta / t)).exp() / beta
    };
    let breaks = [t_lo + 2.0, t_lo + 8.0, t_lo + 25.0];
    let head = integrate_real_interval(g, t_lo, t_hi, &breaks, cfg)?;
    // Remaining pieces via the path driver, seeded with the principal
    // argument at the real junction point.
    let mut rest = Complex64::new(0.0, 0.0);
    if pieces_json.len() > 1 {
        let tail_path = subpath_from(path, 1)?;
        rest = integrate_along_path_seeded(&f, &tail_path, cfg, Some(&[0.0]))?.value;
    }
    Ok(head + rest)
}

/// `w_2(x, eps)` along the given path from the base point (1 + sqrt(eps) for
/// beta = 0; sqrt(eps) for beta > 0, where the integrand vanishes
/// algebraically at the base point).
pub fn w2_value_unfolded(
    u: &UnfoldParams,
    x: Complex64,
    path: &ComplexPath,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let f = UnfoldedW2Prime { u: *u };
    let se = u.sqrt_eps;
    if u.base.beta == 0.0 {
        check_path_endpoints(path, Complex64::new(1.0 + se, 0.0), x, 1.0)?;
        return Ok(integrate_along_path_seeded(&f, path, cfg, None)?.value);
    }
    if cfg.endpoint_singularity_handling != EndpointHandling::AlgebraicWeakening {
        return Err(Error::pre(
            "base point sqrt(eps) with beta > 0 needs algebraic-weakening endpoint handling",
        ));
    }
    check_path_endpoints(path, Complex64::new(se, 0.0), x, 1.0)?;
    let pieces = path.pieces()?;
    let first = pieces[0];
    let (a0, b0) = (first.start(), first.end());
    if a0.im != 0.0 || b0.im != 0.0 || b0.re <= se {
        return Err(Error::pre(
            "first piece must run from sqrt(eps) along the positive real axis",
        ));
    }
    // Exponent of (z - sqrt(eps)) at the base point; large and positive for
    // small eps, so t = se + s^2 grading suffices.
    let expo = u.base.beta / (2.0 * se) - u.base.alpha.re / 2.0;
    if expo <= -0.5 {
        return Err(Error::pre("base-point exponent below -1/2"));
    }
    let cut = |t: f64| f.eval(Complex64::new(t, 0.0), &[0.0, 0.0]);
    let s_max = (b0.re - se).sqrt();
    let g = |s: f64| cut(se + s * s) * Complex64::new(2.0 * s, 0.0);
    let head = integrate_real_interval(g, 0.0, s_max, &[s_max * 0.1, s_max * 0.5], cfg)?;
    let mut rest = Complex64::new(0.0, 0.0);
    if pieces.len() > 1 {
        let tail_path = subpath_from(path, 1)?;
        rest = integrate_along_path_seeded(&f, &tail_path, cfg, Some(&[0.0, 0.0]))?.value;
    }
    Ok(head + rest)
}

/// Polyline tail of a path after dropping its first `skip` flattened pieces.
/// Paths with a singular base point keep their tails polyline-only.
fn subpath_from(path: &ComplexPath, skip: usize) -> Result<ComplexPath> {
    let pieces = path.pieces()?;
    let mut points = vec![pieces[skip].start()];
    for piece in pieces.into_iter().skip(skip) {
        match piece {
            super::path::Piece::Seg { b, .. } => points.push(b),
            super::path::Piece::Arc { .. } => {
                return Err(Error::pre(
                    "paths from a singular base point must continue as polylines",
                ))
            }
        }
    }
    Ok(ComplexPath::polyline(points))
}

/// Confluence probe: tabulates `max_x |w_2(x, eps) - w_2(x, 0)|` over the
/// sample points against eps and fits the empirical convergence order.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub eps_values: Vec<f64>,
    pub max_diff: Vec<f64>,
    pub per_sample: Vec<Vec<f64>>,
    pub empirical_order: f64,
}

/// Waypoint keeping base-to-sample routes away from the finite singular
/// points of every swept eps.
const PROBE_WAYPOINT: Complex64 = Complex64 { re: 0.8, im: 0.7 };

pub fn convergence_probe(
    p: &DcheParams,
    eps_values: &[f64],
    samples: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if p.beta != 0.0 {
        return Err(Error::pre("convergence probe implemented for beta = 0"));
    }
    if eps_values.is_empty() || samples.is_empty() {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    for w in eps_values.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::pre("eps values must be strictly decreasing"));
        }
    }
    // Reference values of the confluent equation.
    let mut reference = Vec::with_capacity(samples.len());
    for &x in samples {
        let path = ComplexPath::polyline(vec![Complex64::new(1.0, 0.0), PROBE_WAYPOINT, x]);
        reference.push(w2_value_dche(p, x, &path, cfg)?);
    }
    let mut max_diff = Vec::with_capacity(eps_values.len());
    let mut per_sample = Vec::with_capacity(eps_values.len());
    for &eps in eps_values {
        let se = eps.sqrt();
        let u = UnfoldParams::new(*p, se)?;
        let sp = singular_points(&u);
        for &x in samples {
            for s in sp.finite() {
                if (x - s).norm() < (3.0 * se).min(0.3) {
                    return Err(Error::pre(format!(
                        "sample {x} too close to singular point {s} at eps = {eps}"
                    )));
                }
            }
        }
        let mut row = Vec::with_capacity(samples.len());
        for (i, &x) in samples.iter().enumerate() {
            let path =
                ComplexPath::polyline(vec![Complex64::new(1.0 + se, 0.0), PROBE_WAYPOINT, x]);
            let v = w2_value_unfolded(&u, x, &path, cfg)?;
            row.push((v - reference[i]).norm());
        }
        max_diff.push(row.iter().cloned().fold(0.0, f64::max));
        per_sample.push(row);
    }
    let empirical_order = if eps_values.len() >= 2 {
        crate::limits::fit_log_slope(eps_values, &max_diff)
    } else {
        f64::NAN
    };
    Ok(ConvergenceReport {
        eps_values: eps_values.to_vec(),
        max_diff,
        per_sample,
        empirical_order,
    })
}
