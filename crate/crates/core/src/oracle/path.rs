//! Piecewise-smooth oriented paths in the complex plane, loadable from JSON
//! documents of the form `{"kind": "circle", "center": {...}, "radius": ...,
//! "turns": 1, "orientation": "ccw"}`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Ccw,
    Cw,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexPath {
    Polyline {
        #[serde(with = "crate::cjson::c64vec")]
        points: Vec<Complex64>,
    },
    Circle {
        #[serde(with = "crate::cjson::c64")]
        center: Complex64,
        radius: f64,
        /// Number of full turns; the sign composes with `orientation`.
        turns: i32,
        #[serde(default)]
        orientation: Orientation,
        /// Parameter angle of the start point (default 0, i.e. center + r).
        #[serde(default)]
        start_angle: f64,
    },
    Composite {
        pieces: Vec<ComplexPath>,
    },
}

/// One smooth piece with a [0, 1] parametrization.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Piece {
    Seg {
        a: Complex64,
        b: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        t0: f64,
        t1: f64,
    },
}

impl Piece {
    pub fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Seg { a, b } => (a + (b - a) * t, b - a),
            Piece::Arc {
                center,
                radius,
                t0,
                t1,
            } => {
                let th = t0 + (t1 - t0) * t;
                let e = Complex64::new(0.0, th).exp();
                (
                    center + radius * e,
                    Complex64::new(0.0, radius * (t1 - t0)) * e,
                )
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0).0
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0).0
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Seg { a, b } => (b - a).norm(),
            Piece::Arc { radius, t0, t1, .. } => radius * (t1 - t0).abs(),
        }
    }

    /// Distance from a point to the piece (conservative for arcs: distance
    /// to the full circle, never larger than the true distance to the arc).
    pub fn min_distance(&self, p: Complex64) -> f64 {
        match *self {
            Piece::Seg { a, b } => {
                let ab = b - a;
                let len2 = ab.norm_sqr();
                if len2 == 0.0 {
                    return (p - a).norm();
                }
                let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
                let t = t.clamp(0.0, 1.0);
                (p - (a + ab * t)).norm()
            }
            Piece::Arc { center, radius, .. } => ((p - center).norm() - radius).abs(),
        }
    }
}

impl ComplexPath {
    pub fn polyline(points: Vec<Complex64>) -> Self {
        ComplexPath::Polyline { points }
    }

    /// Counterclockwise circle starting at `center + radius`.
    pub fn circle(center: Complex64, radius: f64, turns: i32) -> Self {
        ComplexPath::Circle {
            center,
            radius,
            turns,
            orientation: Orientation::Ccw,
            start_angle: 0.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("path JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path serializes")
    }

    /// Flatten into smooth pieces, validating the invariants: distinct
    /// consecutive polyline points, positive radius and nonzero turns,
    /// composite pieces chaining end-to-start.
    pub(crate) fn pieces(&self) -> Result<Vec<Piece>> {
        let mut out = Vec::new();
        self.collect_pieces(&mut out)?;
        if out.is_empty() {
            return Err(Error::domain("empty path"));
        }
        let scale = out.iter().map(|p| p.length()).sum::<f64>().max(1e-300);
        for w in out.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-9 * scale {
                return Err(Error::domain(format!(
                    "path pieces do not chain: {} -> {}",
                    w[0].end(),
                    w[1].start()
                )));
            }
        }
        Ok(out)
    }

    fn collect_pieces(&self, out: &mut Vec<Piece>) -> Result<()> {
        match self {
            ComplexPath::Polyline { points } => {
                if points.len() < 2 {
                    return Err(Error::domain("polyline needs at least two points"));
                }
                for w in points.windows(2) {
                    if (w[0] - w[1]).norm() == 0.0 {
                        return Err(Error::domain("polyline points must be pairwise distinct"));
                    }
                    out.push(Piece::Seg { a: w[0], b: w[1] });
                }
                Ok(())
            }
            ComplexPath::Circle {
                center,
                radius,
                turns,
                orientation,
                start_angle,
            } => {
                if *radius <= 0.0 {
                    return Err(Error::domain("circle radius must be positive"));
                }
                if *turns == 0 {
                    return Err(Error::domain("circle turns must be nonzero"));
                }
                let sign = match orientation {
                    Orientation::Ccw => 1.0,
                    Orientation::Cw => -1.0,
                };
                let total = sign * (*turns as f64) * 2.0 * PI;
                // Quarter-turn arcs keep per-piece windings small.
                let n = (4 * turns.unsigned_abs()).max(4) as usize;
                for i in 0..n {
                    let t0 = start_angle + total * i as f64 / n as f64;
                    let t1 = start_angle + total * (i + 1) as f64 / n as f64;
                    out.push(Piece::Arc {
                        center: *center,
                        radius: *radius,
                        t0,
                        t1,
                    });
                }
                Ok(())
            }
            ComplexPath::Composite { pieces } => {
                for p in pieces {
                    p.collect_pieces(out)?;
                }
                Ok(())
            }
        }
    }

    pub fn start(&self) -> Result<Complex64> {
        Ok(self.pieces()?[0].start())
    }

    pub fn end(&self) -> Result<Complex64> {
        Ok(self.pieces()?.last().unwrap().end())
    }

    pub fn is_closed(&self) -> Result<bool> {
        let pieces = self.pieces()?;
        let scale = pieces.iter().map(|p| p.length()).sum::<f64>();
        Ok((pieces[0].start() - pieces.last().unwrap().end()).norm() <= 1e-9 * scale.max(1.0))
    }
}
