//! The symmetric unfolding of the confluent equation: a Fuchsian equation
//! with finite singular points `x_L = -sqrt(eps)`, `x_R = +sqrt(eps)`,
//! `x_LL = -1/sqrt(eps)`, `x_RR = +1/sqrt(eps)`.
//!
//! Under the two resonance regimes the solution carries logarithmic terms
//! whose coefficients are residues of `w_2'`; this module evaluates their
//! closed forms, the associated nilpotent logs and unipotent monodromy and
//! Stokes matrices, and the partial-fraction data behind the resonant case.

use crate::dche::DcheParams;
use crate::ddc::{dd_div, dd_powi, dd_recip, DdComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix2C;
use crate::special::log_gamma;
use crate::two_pi_i;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use twofloat::TwoFloat;

const RES_TOL: f64 = 1e-9;

/// Complexity cap for the O(m^2) residue sum; larger indices belong to the
/// extrapolation machinery, not to brute force.
pub const D_L_MAX_INDEX: u32 = 2000;

/// Confluent parameters together with the unfolding scale `sqrt(eps)`,
/// fixed real and positive, below 1 so that `|x_L|, |x_R| < 1 < |x_LL|, |x_RR|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnfoldParams {
    pub base: DcheParams,
    pub sqrt_eps: f64,
}

impl UnfoldParams {
    pub fn new(base: DcheParams, sqrt_eps: f64) -> Result<Self> {
        if !(sqrt_eps > 0.0 && sqrt_eps < 1.0) {
            return Err(Error::pre(format!(
                "sqrt_eps must lie in (0, 1), got {sqrt_eps}"
            )));
        }
        Ok(Self { base, sqrt_eps })
    }

    pub fn eps(&self) -> f64 {
        self.sqrt_eps * self.sqrt_eps
    }

    /// `gamma / (2 sqrt(eps))`, the large parameter of the inner Gamma-ratio
    /// sums.
    pub fn gamma_scaled(&self) -> Complex64 {
        self.base.gamma / (2.0 * self.sqrt_eps)
    }

    pub fn resonance_case(&self) -> ResonanceCase {
        if self.base.beta == 0.0 {
            if self.base.alpha_class() == crate::dche::AlphaClass::EvenNatural {
                return ResonanceCase::Res1;
            }
            return ResonanceCase::None;
        }
        if self.base.alpha.im.abs() > RES_TOL {
            return ResonanceCase::None;
        }
        let alpha = self.base.alpha.re;
        let mval = self.base.beta / (2.0 * self.sqrt_eps) + alpha / 2.0;
        let m = mval.round();
        if m < 1.0 || (mval - m).abs() > RES_TOL * (1.0 + m.abs()) {
            return ResonanceCase::None;
        }
        // Excluded: -beta/(2 sqrt(eps)) + alpha/2 = alpha - m in N = {1, 2, ...}.
        let excl = alpha - m;
        let near_int = (excl - excl.round()).abs() <= RES_TOL * (1.0 + excl.abs());
        if near_int && excl.round() >= 1.0 {
            return ResonanceCase::None;
        }
        ResonanceCase::Res2 {
            m: m as u32,
            // N = {1, 2, ...} here, so alpha - m = 0 is admitted; flag it
            // rather than deciding silently.
            boundary_zero: near_int && excl.round() == 0.0,
        }
    }
}

/// Resonance regime of the unfolded equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ResonanceCase {
    /// beta = 0 and alpha an even natural: both x_L and x_R resonant.
    Res1,
    /// beta/(2 sqrt(eps)) + alpha/2 = m in N while alpha - m is not in N:
    /// x_L resonant, x_R not.
    Res2 {
        m: u32,
        boundary_zero: bool,
    },
    None,
}

/// The four finite singular points (all real), plus the one at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPoints {
    pub x_l: f64,
    pub x_r: f64,
    pub x_ll: f64,
    pub x_rr: f64,
    /// Marker for the fifth singular point at infinity.
    pub x_inf: Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Infinity;

impl Serialize for Infinity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("infinity")
    }
}

impl<'de> Deserialize<'de> for Infinity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "infinity" {
            Ok(Infinity)
        } else {
            Err(serde::de::Error::custom("expected \"infinity\""))
        }
    }
}

impl SingularPoints {
    pub fn finite(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x_l, 0.0),
            Complex64::new(self.x_r, 0.0),
            Complex64::new(self.x_ll, 0.0),
            Complex64::new(self.x_rr, 0.0),
        ]
    }
}

pub fn singular_points(u: &UnfoldParams) -> SingularPoints {
    SingularPoints {
        x_l: -u.sqrt_eps,
        x_r: u.sqrt_eps,
        x_ll: -1.0 / u.sqrt_eps,
        x_rr: 1.0 / u.sqrt_eps,
        x_inf: Infinity,
    }
}

/// Which singular point a side refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// The resonant values `sqrt(eps)_m = beta / (2m - alpha)` realizing the
/// second resonance regime, for `m` in `[m_min, m_max]`; entries with
/// `sqrt(eps)` outside `(0, 1)` or with `alpha - m` in `N` are omitted.
pub fn resonant_eps_sequence(p: &DcheParams, m_min: u32, m_max: u32) -> Result<Vec<(u32, f64)>> {
    if p.beta <= 0.0 {
        return Err(Error::pre("resonant sequence requires beta > 0"));
    }
    if p.alpha.im.abs() > RES_TOL {
        return Err(Error::pre("resonant sequence requires real alpha"));
    }
    let alpha = p.alpha.re;
    let mut out = Vec::new();
    for m in m_min..=m_max {
        let den = 2.0 * m as f64 - alpha;
        if den <= 0.0 {
            continue;
        }
        let se = p.beta / den;
        if !(se > 0.0 && se < 1.0) {
            continue;
        }
        let excl = alpha - m as f64;
        let near_int = (excl - excl.round()).abs() <= RES_TOL * (1.0 + excl.abs());
        if near_int && excl.round() >= 1.0 {
            continue;
        }
        out.push((m, se));
    }
    if out.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(out)
}

fn require_res1(u: &UnfoldParams) -> Result<u32> {
    match u.resonance_case() {
        ResonanceCase::Res1 => Ok(u.base.alpha_integer().expect("even natural") as u32),
        other => Err(Error::pre(format!(
            "res1 requires beta = 0 and alpha in 2N (got {other:?})"
        ))),
    }
}

/// Exact integer ratio `Gamma(alpha-1-k) / Gamma(alpha/2)` for even natural
/// alpha and `0 <= k <= (alpha-2)/2`, as a double-double value.
fn gamma_ratio_int_dd(alpha: u32, k: u32) -> TwoFloat {
    let top = alpha - 1 - k; // Gamma argument, >= alpha/2 >= 1
    let bot = alpha / 2;
    let mut r = TwoFloat::from_f64(1.0);
    for j in bot..top {
        r *= TwoFloat::from_f64(j as f64);
    }
    r
}

fn binom_u64(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut r = 1.0f64;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

/// Inner Gamma-ratio sum of the residue closed forms, in double-double
/// complex arithmetic. The ratio
/// `Gamma(c+s) Gamma(c+1) / (Gamma(c) Gamma(c-k+s+1))` is expanded into the
/// Pochhammer product `(c)_s * c (c-1) ... (c-k+s+1)`, which stays
/// cancellation-free when `c = gamma/(2 sqrt(eps))` is large.
fn inner_sum_dd(c: DdComplex, k: u32, r: DdComplex) -> DdComplex {
    let mut total = DdComplex::zero();
    let mut rs = DdComplex::new(1.0, 0.0); // r^s
    for s in 0..=k {
        let mut g = DdComplex::new(binom_u64(k as u64, s as u64), 0.0);
        for j in 0..s {
            g = g * (c + DdComplex::new(j as f64, 0.0));
        }
        for j in 0..(k - s) {
            g = g * (c - DdComplex::new(j as f64, 0.0));
        }
        total = total + g * rs;
        rs = rs * r;
    }
    total
}

struct QPieces {
    /// Per-k outer coefficient times (2 sqrt(eps))^(1+k-alpha), without the
    /// side-dependent sign and A factor.
    coef: Vec<TwoFloat>,
    /// A_R(k) and A_L(k).
    a_r: Vec<DdComplex>,
    a_l: Vec<DdComplex>,
    half: u32,
}

/// Shared double-double evaluation of the residue closed forms under res1.
fn q_pieces(u: &UnfoldParams) -> Result<QPieces> {
    let alpha = require_res1(u)?;
    let half = (alpha - 2) / 2;
    let se = TwoFloat::from_f64(u.sqrt_eps);
    let eps = se * se;
    let one = TwoFloat::from_f64(1.0);
    // ln((1+eps)/(1-eps)) = 2 atanh(eps), summed directly so the relative
    // error stays at double-double level (the library ln_1p is several
    // digits short of that, which the eps^(-(alpha-1)/2) amplification
    // cannot afford).
    let ln_ratio = if u.eps() <= 0.5 {
        let eps2 = eps * eps;
        let mut term = eps; // eps^(2j+1)
        let mut acc = eps;
        for j in 1..80 {
            term *= eps2;
            let add = dd_div(term, TwoFloat::from_f64(2.0 * j as f64 + 1.0));
            acc += add;
            let a: f64 = add.into();
            let s: f64 = acc.into();
            if a.abs() < 1e-36 * s.abs() {
                break;
            }
        }
        acc * TwoFloat::from_f64(2.0)
    } else {
        (eps).ln_1p() - (-eps).ln_1p()
    };
    let c = DdComplex::from_c64(u.base.gamma).scale(dd_recip(TwoFloat::from_f64(2.0) * se));
    let pref_r = (c.scale(ln_ratio)).exp(); // ((1+eps)/(1-eps))^c
    let pref_l = (-(c.scale(ln_ratio))).exp();
    let r_plus = DdComplex::from_real(ln_ratio.exp());
    let r_minus = DdComplex::from_real((-ln_ratio).exp());

    let mut hfact = TwoFloat::from_f64(1.0);
    for j in 2..=half as u64 {
        hfact *= TwoFloat::from_f64(j as f64);
    }
    let inv_hfact = dd_recip(hfact);
    let mut coef = Vec::with_capacity(half as usize + 1);
    let mut a_r = Vec::with_capacity(half as usize + 1);
    let mut a_l = Vec::with_capacity(half as usize + 1);
    for k in 0..=half {
        let sign = if (half - k) % 2 == 0 { 1.0 } else { -1.0 };
        let base = TwoFloat::from_f64(binom_u64(half as u64, k as u64) * sign)
            * inv_hfact
            * gamma_ratio_int_dd(alpha, k)
            * dd_powi(TwoFloat::from_f64(2.0) * se, 1 + k as i32 - alpha as i32);
        coef.push(base);
        let scale_r = dd_powi(dd_div(se, one + eps), k as i32);
        let scale_l = dd_powi(dd_div(se, one - eps), k as i32);
        a_r.push((pref_r * inner_sum_dd(c, k, r_plus)).scale(scale_r));
        a_l.push((pref_l * inner_sum_dd(c, k, r_minus)).scale(scale_l));
    }
    Ok(QPieces {
        coef,
        a_r,
        a_l,
        half,
    })
}

/// Residue of `w_2'` at `x_R` or `x_L` under res1, by the closed double sum.
pub fn q_side(u: &UnfoldParams, side: Side) -> Result<Complex64> {
    let p = q_pieces(u)?;
    let mut total = DdComplex::zero();
    for k in 0..=p.half as usize {
        let term = match side {
            Side::R => p.a_r[k].scale(p.coef[k]),
            // (-2 sqrt(eps))^(1+k-alpha) = (-1)^(k+1) (2 sqrt(eps))^(1+k-alpha)
            // for even alpha.
            Side::L => {
                let sgn = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
                p.a_l[k].scale(p.coef[k] * TwoFloat::from_f64(sgn))
            }
        };
        total = total + term;
    }
    Ok(total.to_c64())
}

/// The sum `q_R + q_L` with its cancellation diagnostic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairedResidueSum {
    #[serde(with = "crate::cjson::c64")]
    pub value: Complex64,
    /// max |paired k-term| / |value|: the cancellation absorbed by the
    /// extended-precision pairing.
    pub condition: f64,
    /// Estimated relative error of `value`.
    pub est_rel_err: f64,
}

/// Effective epsilon of the double-double arithmetic path.
const DD_EPS: f64 = 2e-31;

/// `q_R + q_L`, combining the two closed forms in paired k-terms so the
/// mutually cancelling `eps^{-(alpha-1)/2}` halves never meet in f64.
pub fn q_sum(u: &UnfoldParams) -> Result<PairedResidueSum> {
    let p = q_pieces(u)?;
    let mut total = DdComplex::zero();
    let mut max_term = 0.0f64;
    for k in 0..=p.half as usize {
        let sgn = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let paired = p.a_r[k] + p.a_l[k].scale(TwoFloat::from_f64(sgn));
        let term = paired.scale(p.coef[k]);
        max_term = max_term.max(term.norm_f64());
        total = total + term;
    }
    let value = total.to_c64();
    let condition = if value.norm() > 0.0 {
        max_term / value.norm()
    } else if max_term == 0.0 {
        // Structurally zero sum (gamma = 0): nothing cancelled.
        0.0
    } else {
        f64::INFINITY
    };
    Ok(PairedResidueSum {
        value,
        condition,
        est_rel_err: condition * DD_EPS,
    })
}

/// Slot of a nilpotent logarithm coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NilpotentSlot {
    JL,
    JR,
    TL,
}

/// A nilpotent matrix `[[0, c], [0, 0]]` recorded by its only entry.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NilpotentLog {
    #[serde(with = "crate::cjson::c64")]
    pub coefficient: Complex64,
    pub which: NilpotentSlot,
}

impl NilpotentLog {
    pub fn matrix(&self) -> Matrix2C {
        let zero = Complex64::new(0.0, 0.0);
        Matrix2C::new(zero, self.coefficient, zero, zero)
    }

    /// `exp(2 pi i N) = I + 2 pi i N` for nilpotent `N`.
    pub fn monodromy(&self) -> Matrix2C {
        Matrix2C::unipotent_upper(two_pi_i() * self.coefficient)
    }
}

/// The nilpotent log `J_k` at `x_k` under res1.
pub fn nilpotent_log(u: &UnfoldParams, side: Side) -> Result<NilpotentLog> {
    Ok(NilpotentLog {
        coefficient: q_side(u, side)?,
        which: match side {
            Side::L => NilpotentSlot::JL,
            Side::R => NilpotentSlot::JR,
        },
    })
}

/// Local monodromy `M_k = exp(2 pi i J_k)` around `x_k` under res1.
pub fn monodromy_mk(u: &UnfoldParams, side: Side) -> Result<Matrix2C> {
    Ok(nilpotent_log(u, side)?.monodromy())
}

/// The unfolded monodromy around the origin, `M_R M_L` (= `M_L M_R`).
pub fn unfolded_monodromy(u: &UnfoldParams) -> Result<Matrix2C> {
    let mr = monodromy_mk(u, Side::R)?;
    let ml = monodromy_mk(u, Side::L)?;
    Ok(mr.mul(&ml))
}

fn require_res2(u: &UnfoldParams) -> Result<u32> {
    match u.resonance_case() {
        ResonanceCase::Res2 { m, .. } => Ok(m),
        other => Err(Error::pre(format!(
            "res2 requires beta/(2 sqrt(eps)) + alpha/2 in N with alpha - m not in N (got {other:?})"
        ))),
    }
}

/// Complex log-sum-exp: given terms as (log, unit-phase handled inside),
/// accumulate sum of exp(log_k) stably.
struct LogAccumulator {
    max_re: f64,
    terms: Vec<Complex64>,
}

impl LogAccumulator {
    fn new() -> Self {
        Self {
            max_re: f64::NEG_INFINITY,
            terms: Vec::new(),
        }
    }

    fn push(&mut self, log_term: Complex64) {
        if log_term.re.is_finite() {
            self.max_re = self.max_re.max(log_term.re);
            self.terms.push(log_term);
        }
    }

    /// (log-scale M, sum of exp(log - M)); value = exp(M) * sum.
    fn reduce(&self) -> (f64, Complex64) {
        if self.terms.is_empty() {
            return (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        }
        let m = self.max_re;
        let mut s = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            s += (t - Complex64::new(m, 0.0)).exp();
        }
        (m, s)
    }
}

/// Residue of `w_2'` at the resonant point `x_L` under res2, by the closed
/// O(m^2) sum; all Gamma ratios in log space. Returns an overflow-guard
/// error (reporting the log-value) when the result cannot be represented.
pub fn d_l(u: &UnfoldParams) -> Result<Complex64> {
    let m = require_res2(u)?;
    if m > D_L_MAX_INDEX {
        return Err(Error::pre(format!(
            "resonance index m = {m} exceeds the O(m^2) complexity cap {D_L_MAX_INDEX}; use extrapolation"
        )));
    }
    let alpha = u.base.alpha;
    let se = u.sqrt_eps;
    let eps = se * se;
    let c = u.gamma_scaled();
    let gamma_zero = u.base.gamma.norm() == 0.0;

    // Common prefactor Gamma(m - alpha + 1)/Gamma(m) and A_L's
    // ((1-eps)/(1+eps))^c, all as logs.
    let lg_pre = log_gamma(Complex64::new(m as f64, 0.0) - alpha + 1.0)?
        - log_gamma(Complex64::new(m as f64, 0.0))?;
    let ln_ratio_minus = (-eps).ln_1p() - eps.ln_1p(); // ln((1-eps)/(1+eps))
    let a_pref = c * ln_ratio_minus;
    let ln_2se = Complex64::new((2.0 * se).ln(), PI); // log(-2 sqrt(eps)), arg +pi
    let ln_se_scale = (se / (1.0 - eps)).ln();

    // Prefix sums of Log(c + j) (rising) and Log(c - j) (falling), shared by
    // every (k, s) pair.
    let kmax = (m - 1) as usize;
    let mut rising = vec![Complex64::new(0.0, 0.0); kmax + 1];
    let mut falling = vec![Complex64::new(0.0, 0.0); kmax + 1];
    if !gamma_zero {
        for j in 0..kmax {
            rising[j + 1] = rising[j] + (c + j as f64).ln();
            falling[j + 1] = falling[j] + (c - j as f64).ln();
        }
    }

    let mut outer = LogAccumulator::new();
    let mut ln_binom_outer = 0.0f64; // ln C(m-1, k)
    for k in 0..=kmax {
        // 1/Gamma(2 + k - alpha): zero at the poles.
        let garg = Complex64::new(2.0 + k as f64, 0.0) - alpha;
        let rg_log = match log_gamma(garg) {
            Ok(lg) => -lg,
            Err(_) => {
                // pole: the term vanishes
                ln_binom_outer +=
                    ((m as f64 - 1.0 - k as f64).max(1.0)).ln() - (k as f64 + 1.0).ln();
                continue;
            }
        };
        // Inner sum over s in log space.
        let mut inner = LogAccumulator::new();
        if gamma_zero {
            // Only the s = 0, k = 0 term survives (the Pochhammer products
            // vanish otherwise).
            if k == 0 {
                inner.push(Complex64::new(0.0, 0.0));
            }
        } else {
            let mut ln_binom_inner = 0.0f64;
            for s in 0..=k {
                let lt = Complex64::new(ln_binom_inner, 0.0)
                    + rising[s]
                    + falling[k - s]
                    + (s as f64) * ln_ratio_minus;
                inner.push(lt);
                ln_binom_inner += ((k - s) as f64).max(1.0).ln() - (s as f64 + 1.0).ln();
            }
        }
        let (m_in, s_in) = inner.reduce();
        if s_in.norm() > 0.0 {
            let log_term = lg_pre
                + Complex64::new(ln_binom_outer, 0.0)
                + ln_2se * (1.0 + k as f64 - alpha)
                + rg_log
                + a_pref
                + Complex64::new(k as f64 * ln_se_scale + m_in, 0.0)
                + s_in.ln();
            outer.push(log_term);
        }
        ln_binom_outer += ((m as f64 - 1.0 - k as f64).max(1.0)).ln() - (k as f64 + 1.0).ln();
    }
    let (m_out, s_out) = outer.reduce();
    if s_out.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let log_value = Complex64::new(m_out, 0.0) + s_out.ln();
    if log_value.re.abs() > 700.0 {
        return Err(Error::OverflowGuard {
            log_magnitude: log_value.re,
        });
    }
    Ok(log_value.exp())
}

/// The nilpotent log `T_L` at `x_L` under res2.
pub fn nilpotent_log_tl(u: &UnfoldParams) -> Result<NilpotentLog> {
    Ok(NilpotentLog {
        coefficient: d_l(u)?,
        which: NilpotentSlot::TL,
    })
}

/// The unfolded Stokes matrix `St_L = exp(2 pi i T_L)` under res2.
pub fn unfolded_stokes(u: &UnfoldParams) -> Result<Matrix2C> {
    Ok(nilpotent_log_tl(u)?.monodromy())
}

/// Partial-fraction coefficients of `1/((z - a)(z + a))^h` with
/// `a = sqrt(eps)`, `h = alpha/2`: `c[j-1]/(z-a)^j` and `d[j-1]/(z+a)^j`.
#[derive(Clone, Debug, Serialize)]
pub struct PartialFractionSplit {
    #[serde(with = "crate::cjson::c64vec")]
    pub c: Vec<Complex64>,
    #[serde(with = "crate::cjson::c64vec")]
    pub d: Vec<Complex64>,
}

pub fn partial_fraction_split(u: &UnfoldParams) -> Result<PartialFractionSplit> {
    let alpha = require_res1(u)?;
    let h = alpha / 2;
    let a = u.sqrt_eps;
    let mut c = Vec::with_capacity(h as usize);
    let mut d = Vec::with_capacity(h as usize);
    for j in 1..=h {
        let binom = binom_u64((2 * h - j - 1) as u64, (h - j) as u64);
        let scale = (2.0 * a).powi(-(2 * h as i32 - j as i32));
        let sign_c = if (h - j) % 2 == 0 { 1.0 } else { -1.0 };
        let sign_d = if h % 2 == 0 { 1.0 } else { -1.0 };
        c.push(Complex64::new(sign_c * binom * scale, 0.0));
        d.push(Complex64::new(sign_d * binom * scale, 0.0));
    }
    let split = PartialFractionSplit { c, d };
    // Spot-check the split against direct evaluation at five fixed points
    // away from the poles.
    let probes = [
        Complex64::new(0.30, 0.10),
        Complex64::new(-0.37, 0.21),
        Complex64::new(0.15, -0.43),
        Complex64::new(0.52, 0.33),
        Complex64::new(-0.26, -0.31),
    ];
    for z in probes {
        let direct = ((z - a) * (z + a)).powi(-(h as i32));
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for j in 1..=h as usize {
            let tc = split.c[j - 1] * (z - a).powi(-(j as i32));
            let td = split.d[j - 1] * (z + a).powi(-(j as i32));
            sum += tc + td;
            mass += tc.norm() + td.norm();
        }
        // The evaluation itself cancels up to mass/|direct| digits; allow
        // that much f64 noise on top of the contract tolerance.
        let tol = 1e-12 + 50.0 * f64::EPSILON * mass / direct.norm();
        let rel = (sum - direct).norm() / direct.norm();
        if rel > tol {
            return Err(Error::domain(format!(
                "partial-fraction self-check failed at z = {z}: rel err {rel:e}"
            )));
        }
    }
    Ok(split)
}
