//! 2x2 complex matrices. Every monodromy and Stokes matrix produced here is
//! unipotent upper-triangular, so the type carries helpers for exactly that
//! shape.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2C {
    #[serde(with = "crate::cjson::c64")]
    pub a11: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub a12: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub a21: Complex64,
    #[serde(with = "crate::cjson::c64")]
    pub a22: Complex64,
}

impl Matrix2C {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Self::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// `[[1, t], [0, 1]]`.
    pub fn unipotent_upper(t: Complex64) -> Self {
        let mut m = Self::identity();
        m.a12 = t;
        m
    }

    pub fn is_unipotent_upper(&self, tol: f64) -> bool {
        (self.a11 - 1.0).norm() <= tol && (self.a22 - 1.0).norm() <= tol && self.a21.norm() <= tol
    }

    pub fn mul(&self, o: &Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn sub(&self, o: &Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }

    pub fn commutator(&self, o: &Matrix2C) -> Matrix2C {
        self.mul(o).sub(&o.mul(self))
    }

    /// Entrywise max modulus.
    pub fn max_norm(&self) -> f64 {
        self.a11
            .norm()
            .max(self.a12.norm())
            .max(self.a21.norm())
            .max(self.a22.norm())
    }

    pub fn entrywise_distance(&self, o: &Matrix2C) -> f64 {
        self.sub(o).max_norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipotent_squares_to_zero() {
        let m = Matrix2C::unipotent_upper(Complex64::new(2.0, -3.0));
        let n = m.sub(&Matrix2C::identity());
        let n2 = n.mul(&n);
        assert_eq!(n2.max_norm(), 0.0);
    }

    #[test]
    fn unipotent_product_adds_offsets() {
        let a = Matrix2C::unipotent_upper(Complex64::new(1.0, 1.0));
        let b = Matrix2C::unipotent_upper(Complex64::new(-0.5, 2.0));
        let p = a.mul(&b);
        assert_eq!(p.a12, Complex64::new(0.5, 3.0));
        assert!(p.is_unipotent_upper(0.0));
        assert_eq!(a.commutator(&b).max_norm(), 0.0);
    }
}
