//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands, along
//! real intervals and along complex paths with continuity-tracked branch
//! arguments.
//!
//! Multivalued powers `(z - x_k)^c` are never evaluated on the per-point
//! principal branch: the driver carries a continuous `arg(z - x_k)` for every
//! branch point, seeded at the path start and propagated panel by panel. A
//! panel is kept short against the distance to the nearest branch point, so
//! each in-panel argument increment is well under pi and the winding is
//! unambiguous.

use super::integrand::BranchedIntegrand;
use super::path::{ComplexPath, Piece};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// 15-point Kronrod abscissae (non-negative half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// 15-point Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// 7-point Gauss weights (for the odd-indexed Kronrod abscissae).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointHandling {
    None,
    AlgebraicWeakening,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub endpoint_singularity_handling: EndpointHandling,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 48,
            endpoint_singularity_handling: EndpointHandling::None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rel_tol < 1e-14 {
            return Err(Error::pre("quadrature rel_tol must be >= 1e-14"));
        }
        if self.max_depth > 60 {
            return Err(Error::pre("quadrature max_depth must be <= 60"));
        }
        Ok(())
    }

    fn max_panels(&self) -> usize {
        (1usize << self.max_depth.min(14)).max(1024)
    }
}

/// QUADPACK-style error rescaling from the raw |K15 - G7| difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod evaluation of a complex integrand over [a, b].
fn gk15<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    for (j, &x) in XGK.iter().enumerate() {
        if j == 7 {
            fv[7] = f(center);
        } else {
            fv[j] = f(center - half * x);
            fv[14 - j] = f(center + half * x);
        }
    }
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut res_abs = 0.0;
    for (j, &w) in WGK.iter().enumerate() {
        if j == 7 {
            kronrod += w * fv[7];
            res_abs += w * fv[7].norm();
        } else {
            kronrod += w * (fv[j] + fv[14 - j]);
            res_abs += w * (fv[j].norm() + fv[14 - j].norm());
        }
    }
    let mut gauss = Complex64::new(0.0, 0.0);
    for (i, &w) in WG.iter().enumerate() {
        let j = 2 * i + 1;
        if j == 7 {
            gauss += w * fv[7];
        } else {
            gauss += w * (fv[j] + fv[14 - j]);
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fv[7] - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    let err = ((kronrod - gauss) * half).norm();
    (
        kronrod * half,
        rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
        res_abs * half.abs(),
    )
}

struct RealPanel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

/// Adaptive integration of a complex-valued function over a real interval,
/// with optional interior breakpoints honored by the initial subdivision.
pub fn integrate_real_interval<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    let mut edges: Vec<f64> = vec![a];
    for &t in breaks {
        if t > a && t < b {
            edges.push(t);
        }
    }
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();

    let mut panels: Vec<RealPanel> = Vec::new();
    for w in edges.windows(2) {
        let (v, e, _) = gk15(&mut f, w[0], w[1]);
        panels.push(RealPanel {
            a: w[0],
            b: w[1],
            value: v,
            err: e,
        });
    }
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if err <= tol {
            return Ok(total);
        }
        if panels.len() >= cfg.max_panels() {
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let RealPanel { a, b, .. } = panels[worst];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            // Interval exhausted at machine precision.
            let total: Complex64 = panels.iter().map(|p| p.value).sum();
            return Ok(total);
        }
        let (v1, e1, _) = gk15(&mut f, a, m);
        let (v2, e2, _) = gk15(&mut f, m, b);
        panels[worst] = RealPanel {
            a,
            b: m,
            value: v1,
            err: e1,
        };
        panels.push(RealPanel {
            a: m,
            b,
            value: v2,
            err: e2,
        });
    }
}

/// A panel of a path piece, carrying the continuous branch arguments at its
/// left endpoint.
struct PathPanel {
    piece: usize,
    t0: f64,
    t1: f64,
    args0: Vec<f64>,
    value: Complex64,
    err: f64,
}

fn propagate_args(bps: &[Complex64], from: Complex64, to: Complex64, args: &[f64]) -> Vec<f64> {
    bps.iter()
        .zip(args)
        .map(|(&b, &a)| a + ((to - b) / (from - b)).arg())
        .collect()
}

fn eval_on_panel(
    f: &dyn BranchedIntegrand,
    bps: &[Complex64],
    piece: &Piece,
    t0: f64,
    args0: &[f64],
    t: f64,
) -> Complex64 {
    let (z0, _) = piece.at(t0);
    let (z, dz) = piece.at(t);
    let args = propagate_args(bps, z0, z, args0);
    f.eval(z, &args) * dz
}

pub struct PathIntegral {
    pub value: Complex64,
    pub err_est: f64,
    pub start_args: Vec<f64>,
    pub end_args: Vec<f64>,
}

/// Integrate a branch-tracked integrand along a path. `seed_args`, when
/// given, fixes the continuous `arg(z - x_k)` values at the path start;
/// otherwise the principal arguments are used.
pub fn integrate_along_path_seeded(
    f: &dyn BranchedIntegrand,
    path: &ComplexPath,
    cfg: &QuadratureConfig,
    seed_args: Option<&[f64]>,
) -> Result<PathIntegral> {
    cfg.validate()?;
    let pieces = path.pieces()?;
    let bps = f.branch_points();

    // Reject paths passing too close to a branch point; the margin follows
    // the typical piece scale.
    let total_len: f64 = pieces.iter().map(|p| p.length()).sum();
    let margin = 1e-3 * (total_len / pieces.len() as f64).max(1e-12);
    for piece in &pieces {
        for &bp in &bps {
            let d = piece.min_distance(bp);
            if d <= margin {
                return Err(Error::SingularPointOnPath {
                    point: bp,
                    distance: d,
                });
            }
        }
    }

    let start = pieces[0].start();
    let start_args: Vec<f64> = match seed_args {
        Some(s) => {
            if s.len() != bps.len() {
                return Err(Error::pre("seed_args length mismatch"));
            }
            s.to_vec()
        }
        None => bps.iter().map(|&b| (start - b).arg()).collect(),
    };

    // Initial panels: each short against the distance to the nearest branch
    // point so in-panel argument increments stay well below pi.
    let mut panels: Vec<PathPanel> = Vec::new();
    let mut args = start_args.clone();
    for (pi, piece) in pieces.iter().enumerate() {
        let min_dist = bps
            .iter()
            .map(|&b| piece.min_distance(b))
            .fold(f64::INFINITY, f64::min);
        let n = if min_dist.is_finite() {
            ((4.0 * piece.length() / min_dist).ceil() as usize).clamp(4, 4096)
        } else {
            4
        };
        for i in 0..n {
            let t0 = i as f64 / n as f64;
            let t1 = (i + 1) as f64 / n as f64;
            let (v, e, _) = gk15(|t| eval_on_panel(f, &bps, piece, t0, &args, t), t0, t1);
            panels.push(PathPanel {
                piece: pi,
                t0,
                t1,
                args0: args.clone(),
                value: v,
                err: e,
            });
            let (z0, _) = piece.at(t0);
            let (z1, _) = piece.at(t1);
            args = propagate_args(&bps, z0, z1, &args);
        }
    }
    let end_args = args;

    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if err <= tol {
            return Ok(PathIntegral {
                value: total,
                err_est: err,
                start_args,
                end_args,
            });
        }
        if panels.len() >= cfg.max_panels() {
            return Err(Error::ToleranceNotMet {
                estimate: total,
                error: err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (pi, t0, t1) = (panels[worst].piece, panels[worst].t0, panels[worst].t1);
        let tm = 0.5 * (t0 + t1);
        if tm <= t0 || tm >= t1 {
            let total: Complex64 = panels.iter().map(|p| p.value).sum();
            return Ok(PathIntegral {
                value: total,
                err_est: err,
                start_args,
                end_args,
            });
        }
        let piece = pieces[pi];
        let args0 = panels[worst].args0.clone();
        let (z0, _) = piece.at(t0);
        let (zm, _) = piece.at(tm);
        let args_m = propagate_args(&bps, z0, zm, &args0);
        let (v1, e1, _) = gk15(|t| eval_on_panel(f, &bps, &piece, t0, &args0, t), t0, tm);
        let (v2, e2, _) = gk15(|t| eval_on_panel(f, &bps, &piece, tm, &args_m, t), tm, t1);
        panels[worst] = PathPanel {
            piece: pi,
            t0,
            t1: tm,
            args0,
            value: v1,
            err: e1,
        };
        panels.push(PathPanel {
            piece: pi,
            t0: tm,
            t1,
            args0: args_m,
            value: v2,
            err: e2,
        });
    }
}

/// Integrate along a path with principal-branch seeding at the start point.
pub fn integrate_along_path(
    f: &dyn BranchedIntegrand,
    path: &ComplexPath,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    Ok(integrate_along_path_seeded(f, path, cfg, None)?.value)
}

#[cfg(test)]
mod tests {
    use super::super::path::Orientation;
    use super::*;
    use crate::oracle::integrand::PlainIntegrand;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_segment_of_one() {
        let f = PlainIntegrand(|_z| c(1.0, 0.0));
        let path = ComplexPath::polyline(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let v = integrate_along_path(&f, &path, &QuadratureConfig::default()).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cauchy_integral_of_reciprocal() {
        // (1/z) around the unit circle ccw = 2 pi i.
        let f = PlainIntegrand(|z: Complex64| z.inv());
        let path = ComplexPath::circle(c(0.0, 0.0), 1.0, 1);
        let v = integrate_along_path(&f, &path, &QuadratureConfig::default()).unwrap();
        assert!((v - c(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-12);
    }

    #[test]
    fn turns_and_orientation_scale_winding() {
        let f = PlainIntegrand(|z: Complex64| z.inv());
        let path = ComplexPath::Circle {
            center: c(0.0, 0.0),
            radius: 0.5,
            turns: 3,
            orientation: Orientation::Cw,
            start_angle: 1.0,
        };
        let v = integrate_along_path(&f, &path, &QuadratureConfig::default()).unwrap();
        assert!((v - c(0.0, -6.0 * std::f64::consts::PI)).norm() < 1e-11);
    }

    #[test]
    fn real_interval_exponential() {
        let v = integrate_real_interval(
            |t| c(t.exp(), 0.0),
            0.0,
            1.0,
            &[],
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-13);
    }
}
