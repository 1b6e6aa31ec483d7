//! Shared parameter fixtures for the benchmark targets.

use heun_unfold_core::{Complex64, DcheParams, UnfoldParams};

pub fn res1_case(alpha: f64, sqrt_eps: f64) -> UnfoldParams {
    let p = DcheParams::new(Complex64::new(alpha, 0.0), 0.0, Complex64::new(0.7, 0.3)).unwrap();
    UnfoldParams::new(p, sqrt_eps).unwrap()
}

pub fn res2_case(m: u32) -> UnfoldParams {
    let p = DcheParams::new(Complex64::new(0.5, 0.0), 1.0, Complex64::new(0.4, 0.0)).unwrap();
    let se = 1.0 / (2.0 * m as f64 - 0.5);
    UnfoldParams::new(p, se).unwrap()
}

pub fn irregular_case() -> DcheParams {
    DcheParams::new(Complex64::new(3.0, 0.0), 1.0, Complex64::new(0.4, 0.0)).unwrap()
}
