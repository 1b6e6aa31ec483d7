//! Minimal complex arithmetic over double-double reals.
//!
//! The paired residue sum `q_R + q_L` cancels the divergent
//! `eps^{-(alpha-1)/2}` growth of its two halves; for alpha up to 8 and eps
//! down to 1e-6 the intermediate terms exceed the final value by up to ~17
//! decimal orders, past what f64 can absorb. The closed forms are tiny finite
//! sums, so evaluating them in ~31-digit double-double arithmetic is cheap
//! and leaves the public f64 surface untouched.

use num_complex::Complex64;
use twofloat::TwoFloat;

#[derive(Clone, Copy, Debug)]
pub(crate) struct DdComplex {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl DdComplex {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            re: TwoFloat::from_f64(re),
            im: TwoFloat::from_f64(im),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    pub fn from_real(x: TwoFloat) -> Self {
        Self {
            re: x,
            im: TwoFloat::from_f64(0.0),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.into(), self.im.into())
    }

    pub fn norm_f64(self) -> f64 {
        let re: f64 = self.re.into();
        let im: f64 = self.im.into();
        re.hypot(im)
    }

    pub fn scale(self, s: TwoFloat) -> Self {
        Self {
            re: self.re * s,
            im: self.im * s,
        }
    }

    /// exp(z) for complex double-double z, by Taylor summation with argument
    /// halving. The crate's own `exp`/`cos`/`sin` only reach ~1e-20 relative
    /// accuracy, which the cancellation-amplified residue sums cannot afford.
    pub fn exp(self) -> Self {
        let mag = self.norm_f64();
        if !mag.is_finite() {
            let z = self.to_c64().exp();
            return Self::from_c64(z);
        }
        // Halve until |z| <= 1/4, sum the series, square back.
        let mut halvings = 0u32;
        let mut w = self;
        let half = TwoFloat::from_f64(0.5);
        let mut m = mag;
        while m > 0.25 {
            w = w.scale(half);
            m *= 0.5;
            halvings += 1;
        }
        let mut term = DdComplex::new(1.0, 0.0);
        let mut sum = DdComplex::new(1.0, 0.0);
        for n in 1..40 {
            term = (term * w).scale(dd_recip(TwoFloat::from_f64(n as f64)));
            sum = sum + term;
            if term.norm_f64() < 1e-36 * sum.norm_f64() {
                break;
            }
        }
        for _ in 0..halvings {
            sum = sum * sum;
        }
        sum
    }
}

impl std::ops::Add for DdComplex {
    type Output = DdComplex;
    fn add(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl std::ops::Sub for DdComplex {
    type Output = DdComplex;
    fn sub(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl std::ops::Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl std::ops::Neg for DdComplex {
    type Output = DdComplex;
    fn neg(self) -> DdComplex {
        DdComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Double-double division by Newton refinement of the f64 quotient. The
/// crate's own `Div`/`recip` only carry f64-level accuracy, so every
/// division on the extended-precision path goes through here.
pub(crate) fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q0 = TwoFloat::from_f64(a.hi() / b.hi());
    let r0 = a - b * q0;
    let q1 = q0 + TwoFloat::from_f64(r0.hi() / b.hi());
    let r1 = a - b * q1;
    q1 + TwoFloat::from_f64(r1.hi() / b.hi())
}

pub(crate) fn dd_recip(b: TwoFloat) -> TwoFloat {
    dd_div(TwoFloat::from_f64(1.0), b)
}

/// Integer power of a double-double real (repeated squaring; reciprocal via
/// the refined division).
pub(crate) fn dd_powi(base: TwoFloat, n: i32) -> TwoFloat {
    if n < 0 {
        return dd_recip(dd_powi(base, -n));
    }
    let mut result = TwoFloat::from_f64(1.0);
    let mut value = base;
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result *= value;
        }
        value *= value;
        k >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_f64_path() {
        let z = DdComplex::new(0.3, -1.2);
        let got = z.exp().to_c64();
        let want = Complex64::new(0.3, -1.2).exp();
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn mul_is_exacter_than_f64() {
        // (1 + 2^-30)^2 kept to double-double accuracy.
        let x = TwoFloat::from_f64(1.0) + TwoFloat::from_f64(2f64.powi(-30));
        let y = x * x;
        let err = y
            - (TwoFloat::from_f64(1.0)
                + TwoFloat::from_f64(2f64.powi(-29))
                + TwoFloat::from_f64(2f64.powi(-60)));
        let e: f64 = err.into();
        assert!(e.abs() < 1e-40);
    }

    #[test]
    fn refined_division_keeps_double_double_accuracy() {
        // 1/3 = 0.01010101..._2; the low word must carry the remainder.
        let third = dd_recip(TwoFloat::from_f64(3.0));
        let back = third * TwoFloat::from_f64(3.0) - TwoFloat::from_f64(1.0);
        let e: f64 = back.into();
        assert!(e.abs() < 1e-31, "1/3 round trip error {e:e}");
        // (0.01)^-5 against the exact reciprocal of the exact power.
        let x5 = dd_powi(TwoFloat::from_f64(0.01), -5);
        let prod = x5 * dd_powi(TwoFloat::from_f64(0.01), 5) - TwoFloat::from_f64(1.0);
        let e: f64 = prod.into();
        assert!(e.abs() < 1e-30, "powi round trip error {e:e}");
    }
}
