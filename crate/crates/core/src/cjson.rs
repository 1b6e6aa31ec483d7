//! JSON representation of complex scalars as `{"re": float, "im": float}`
//! (the upstream `Complex64` serde impl uses a tuple, which machine-readable
//! reports avoid). Use with `#[serde(with = "cjson::c64")]` and
//! `#[serde(with = "cjson::c64vec")]`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

pub mod c64 {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex64::new(v.re, v.im))
    }
}

pub mod c64vec {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ReIm> = zs.iter().map(|z| ReIm { re: z.re, im: z.im }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<ReIm>::deserialize(d)?;
        Ok(v.into_iter().map(|r| Complex64::new(r.re, r.im)).collect())
    }
}
