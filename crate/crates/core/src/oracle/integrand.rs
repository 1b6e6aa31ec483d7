//! The explicit `w_2'` integrands of both equations, evaluated with
//! externally supplied continuous branch arguments. All factors are combined
//! in log space before a single `exp`, so exponents of size
//! `beta/(2 sqrt(eps)) ~ 1e2..1e4` cannot overflow intermediate values.

use crate::dche::DcheParams;
use crate::error::{Error, Result};
use crate::unfold::UnfoldParams;
use num_complex::Complex64;

/// An integrand whose multivalued factors are powers of `(z - b_j)`; the
/// quadrature driver supplies a continuous `arg(z - b_j)` per branch point.
pub trait BranchedIntegrand {
    fn branch_points(&self) -> Vec<Complex64>;
    fn eval(&self, z: Complex64, branch_args: &[f64]) -> Complex64;
}

/// Adapter for single-valued integrands.
pub struct PlainIntegrand<F: Fn(Complex64) -> Complex64>(pub F);

impl<F: Fn(Complex64) -> Complex64> BranchedIntegrand for PlainIntegrand<F> {
    fn branch_points(&self) -> Vec<Complex64> {
        Vec::new()
    }

    fn eval(&self, z: Complex64, _branch_args: &[f64]) -> Complex64 {
        (self.0)(z)
    }
}

/// `w_2'(z, 0) = z^(-alpha) e^(-beta/z) e^(gamma z)`, branch point at 0.
pub struct DcheW2Prime {
    pub p: DcheParams,
}

impl BranchedIntegrand for DcheW2Prime {
    fn branch_points(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0)]
    }

    fn eval(&self, z: Complex64, branch_args: &[f64]) -> Complex64 {
        let ln_z = Complex64::new(z.norm().ln(), branch_args[0]);
        (-self.p.alpha * ln_z - self.p.beta * z.inv() + self.p.gamma * z).exp()
    }
}

/// `w_2'(z, eps) = (z - se)^(b/(2se) - a/2) (z + se)^(-b/(2se) - a/2)
/// ((1 + se z)/(1 - se z))^(g/(2se))`, branch points at `x_R` (index 0) and
/// `x_L` (index 1). The last factor is holomorphic for `|z| < 1/se` and uses
/// the principal logarithm.
pub struct UnfoldedW2Prime {
    pub u: UnfoldParams,
}

impl UnfoldedW2Prime {
    fn exponents(&self) -> (Complex64, Complex64, Complex64) {
        let se = self.u.sqrt_eps;
        let half_alpha = self.u.base.alpha / 2.0;
        let b_scaled = self.u.base.beta / (2.0 * se);
        (
            Complex64::new(b_scaled, 0.0) - half_alpha,
            Complex64::new(-b_scaled, 0.0) - half_alpha,
            self.u.gamma_scaled(),
        )
    }
}

impl BranchedIntegrand for UnfoldedW2Prime {
    fn branch_points(&self) -> Vec<Complex64> {
        let se = self.u.sqrt_eps;
        vec![Complex64::new(se, 0.0), Complex64::new(-se, 0.0)]
    }

    fn eval(&self, z: Complex64, branch_args: &[f64]) -> Complex64 {
        let se = self.u.sqrt_eps;
        let (e_r, e_l, c) = self.exponents();
        let ln_r = Complex64::new((z - se).norm().ln(), branch_args[0]);
        let ln_l = Complex64::new((z + se).norm().ln(), branch_args[1]);
        let ln_q = (1.0 + se * z).ln() - (1.0 - se * z).ln();
        (e_r * ln_r + e_l * ln_l + c * ln_q).exp()
    }
}

/// Standalone evaluation of `w_2'(z, 0)` with a caller-chosen continuous
/// `arg(z)` (the principal value reproduces a single-sheet evaluation).
pub fn w2prime_dche(p: &DcheParams, z: Complex64, branch_angle: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("w_2' undefined at z = 0"));
    }
    Ok(DcheW2Prime { p: *p }.eval(z, &[branch_angle]))
}

/// Standalone evaluation of `w_2'(z, eps)`; `branch_seed` fixes the
/// continuous `(arg(z - x_R), arg(z - x_L))`, defaulting to principal values.
pub fn w2prime_unfolded(
    u: &UnfoldParams,
    z: Complex64,
    branch_seed: Option<(f64, f64)>,
) -> Result<Complex64> {
    let se = u.sqrt_eps;
    for s in [se, -se, 1.0 / se, -1.0 / se] {
        if (z - s).norm() == 0.0 {
            return Err(Error::domain(format!("w_2' singular at z = {z}")));
        }
    }
    let args = match branch_seed {
        Some((ar, al)) => [ar, al],
        None => [(z - se).arg(), (z + se).arg()],
    };
    Ok(UnfoldedW2Prime { u: *u }.eval(z, &args))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{E, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(alpha: f64, beta: f64, gamma: f64) -> DcheParams {
        DcheParams::new(c(alpha, 0.0), beta, c(gamma, 0.0)).unwrap()
    }

    #[test]
    fn w2prime_dche_values() {
        // alpha = beta = gamma = 0: identically 1.
        let v = w2prime_dche(&params(0.0, 0.0, 0.0), c(0.7, -0.2), (c(0.7, -0.2)).arg()).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        // alpha=2, beta=0, gamma=1 at z=1: e.
        let v = w2prime_dche(&params(2.0, 0.0, 1.0), c(1.0, 0.0), 0.0).unwrap();
        assert!((v - c(E, 0.0)).norm() < 1e-14);
        // Frozen high-precision value at z = 2 e^{i pi/4}.
        let z = 2.0 * c(0.0, FRAC_PI_4).exp();
        let v = w2prime_dche(&params(1.5, 1.0, 0.3), z, z.arg()).unwrap();
        let want = c(0.34946304856244041, -0.14786587321136354);
        assert!((v - want).norm() < 1e-15, "got {v}");
    }

    #[test]
    fn w2prime_dche_branch_angle_sheet() {
        // One positive turn multiplies z^(-alpha) by e^(-2 pi i alpha).
        let p = params(1.5, 0.0, 0.0);
        let z = c(0.5, 0.3);
        let v0 = w2prime_dche(&p, z, z.arg()).unwrap();
        let v1 = w2prime_dche(&p, z, z.arg() + 2.0 * PI).unwrap();
        let expect = v0 * (c(0.0, -2.0 * PI) * 1.5).exp();
        assert!((v1 - expect).norm() < 1e-14 * v0.norm());
    }

    #[test]
    fn w2prime_unfolded_res1_alpha2_form() {
        // res1, alpha=2: integrand = (z^2 - eps)^(-1) ((1+se z)/(1-se z))^(g/(2se)).
        let u = UnfoldParams::new(params(2.0, 0.0, 0.9), 0.25).unwrap();
        let z = c(0.4, 0.3);
        let got = w2prime_unfolded(&u, z, None).unwrap();
        let se = 0.25;
        let want = ((z * z - se * se).inv())
            * ((c(0.9, 0.0) / (2.0 * se)) * ((1.0 + se * z) / (1.0 - se * z)).ln()).exp();
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn unfolded_converges_to_confluent_pointwise() {
        // |w_2'(z, eps) - w_2'(z, 0)| -> 0 at z = 1 + 0.5i as sqrt(eps) -> 0.
        let p = params(1.3, 0.7, 0.4);
        let z = c(1.0, 0.5);
        let limit = w2prime_dche(&p, z, z.arg()).unwrap();
        let mut last = f64::INFINITY;
        for se in [1e-1, 1e-2, 1e-3, 1e-4] {
            let u = UnfoldParams::new(p, se).unwrap();
            let d = (w2prime_unfolded(&u, z, None).unwrap() - limit).norm();
            assert!(d < last, "se={se}: {d} !< {last}");
            last = d;
        }
        assert!(last < 1e-7 * limit.norm());
    }

    #[test]
    fn singular_points_rejected() {
        let u = UnfoldParams::new(params(2.0, 0.0, 1.0), 0.1).unwrap();
        assert!(w2prime_unfolded(&u, c(0.1, 0.0), None).is_err());
        assert!(w2prime_dche(&params(1.0, 0.0, 0.0), c(0.0, 0.0), 0.0).is_err());
    }
}
