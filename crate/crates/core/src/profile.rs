//! Radial profiles in the half space.
//!
//! A profile is a finite sum of terms `c * rho^(2a) * t^k * Q^(-s/2) * (log Q)^l`
//! with `Q = rho^2 + (1+t)^2`. Here `rho = |ybar|` and `t = y_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_dual::DualNum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{ExactScalar, ScalarError};

/// Largest working precision the evaluator supports, in bits.
pub const MAX_PRECISION_BITS: u32 = 53;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("dimension n = {0} is below the supported minimum 5")]
    DimensionTooSmall(u32),
    #[error("requested {requested} bits of precision, at most {max} are available")]
    PrecisionUnsupported { requested: u32, max: u32 },
    #[error("evaluation at ({rho}, {t}) is outside the domain rho >= 0, t >= 0")]
    OutsideDomain { rho: f64, t: f64 },
    #[error("evaluation overflowed at ({rho}, {t})")]
    Overflow { rho: f64, t: f64 },
    #[error("power of a profile is only defined for a single pure Q-power term")]
    UnsupportedPower,
    #[error("cannot parse profile: {0}")]
    Parse(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Exponent tuple of one term. Ordering is the display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponents {
    pub q_neg_twice_exp: i32,
    pub rho_half_deg: u32,
    pub t_deg: u32,
    pub log_deg: u32,
}

impl Exponents {
    pub fn new(rho_half_deg: u32, t_deg: u32, q_neg_twice_exp: i32, log_deg: u32) -> Self {
        Self { q_neg_twice_exp, rho_half_deg, t_deg, log_deg }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileTerm {
    pub coeff: ExactScalar,
    pub rho_half_deg: u32,
    pub t_deg: u32,
    pub q_neg_twice_exp: i32,
    pub log_deg: u32,
}

impl ProfileTerm {
    pub fn exponents(&self) -> Exponents {
        Exponents::new(self.rho_half_deg, self.t_deg, self.q_neg_twice_exp, self.log_deg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    DRhoRho,
    InvRhoDRho,
    DT,
    DTT,
}

/// Harmonic polynomial factor in the boundary variables multiplying a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicFactor {
    /// The constant 1.
    Scalar,
    /// `R_ninj y_i y_j` with `R_ninj` symmetric and trace free.
    RnPair,
    /// `Rbar_ikjl y_i y_j y_k y_l`, a harmonic quartic.
    RiemQuad,
}

impl HarmonicFactor {
    pub fn degree(self) -> u32 {
        match self {
            HarmonicFactor::Scalar => 0,
            HarmonicFactor::RnPair => 2,
            HarmonicFactor::RiemQuad => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HarmonicFactor::Scalar => "scalar",
            HarmonicFactor::RnPair => "rn_pair",
            HarmonicFactor::RiemQuad => "riem_quad",
        }
    }
}

/// Canonical sum of profile terms. Equality is equality of functions, decided
/// on the reduced form where every `rho^2` is rewritten as `Q - (1+t)^2`.
#[derive(Clone, Default)]
pub struct RadialProfile {
    terms: BTreeMap<Exponents, ExactScalar>,
}

impl PartialEq for RadialProfile {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms || (self - other).reduced().is_empty()
    }
}

impl Eq for RadialProfile {}

impl RadialProfile {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::term(c, 0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    /// Single term `c * rho^(2a) * t^k * Q^(-s/2) * (log Q)^l`.
    pub fn term(c: ExactScalar, a: u32, k: u32, s: i32, l: u32) -> Self {
        let mut p = Self::zero();
        p.push(Exponents::new(a, k, s, l), c);
        p
    }

    /// `Q^(-s/2)`.
    pub fn q_pow(s: i32) -> Self {
        Self::term(ExactScalar::one(), 0, 0, s, 0)
    }

    /// `rho^2`.
    pub fn rho2() -> Self {
        Self::term(ExactScalar::one(), 1, 0, 0, 0)
    }

    /// `t^k`.
    pub fn t_pow(k: u32) -> Self {
        Self::term(ExactScalar::one(), 0, k, 0, 0)
    }

    /// `log Q`.
    pub fn log_q() -> Self {
        Self::term(ExactScalar::one(), 0, 0, 0, 1)
    }

    /// Polynomial in `t` with the given coefficients, lowest degree first.
    pub fn t_poly(coeffs: &[ExactScalar]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.push(Exponents::new(0, k as u32, 0, 0), c.clone());
        }
        p
    }

    /// The bubble `Q^(-(n-2)/2)`.
    pub fn bubble(n: u32) -> Self {
        Self::q_pow(n as i32 - 2)
    }

    pub fn from_terms<I: IntoIterator<Item = ProfileTerm>>(terms: I) -> Self {
        let mut p = Self::zero();
        for t in terms {
            let e = t.exponents();
            p.push(e, t.coeff);
        }
        p
    }

    fn push(&mut self, e: Exponents, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(ExactScalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ProfileTerm> + '_ {
        self.terms.iter().map(|(e, c)| ProfileTerm {
            coeff: c.clone(),
            rho_half_deg: e.rho_half_deg,
            t_deg: e.t_deg,
            q_neg_twice_exp: e.q_neg_twice_exp,
            log_deg: e.log_deg,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Exponents, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the profile is the zero function.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.reduced().is_empty()
    }

    /// Unique representative without `rho` factors: each `rho^(2a)` becomes
    /// `(Q - (1+t)^2)^a` expanded in powers of `Q` and `t`.
    pub fn reduced(&self) -> Self {
        if self.terms.keys().all(|e| e.rho_half_deg == 0) {
            return self.clone();
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let a = e.rho_half_deg;
            // (Q - u^2)^a with u = 1 + t
            for j in 0..=a {
                let sign = if (a - j) % 2 == 0 { 1 } else { -1 };
                let cj = c * &ExactScalar::from_big(binomial(a, j).into()) * ExactScalar::int(sign);
                let m = 2 * (a - j);
                for i in 0..=m {
                    let ci = &cj * &ExactScalar::from_big(binomial(m, i).into());
                    out.push(Exponents::new(0, e.t_deg + i, e.q_neg_twice_exp - 2 * j as i32, e.log_deg), ci);
                }
            }
        }
        out
    }

    pub fn is_log_free(&self) -> bool {
        self.terms.keys().all(|e| e.log_deg == 0)
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.keys().all(|e| e.t_deg == 0)
    }

    /// Rebuilds the canonical form from the term list; a no-op on valid values.
    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.terms())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn multiply(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = Exponents::new(
                    e1.rho_half_deg + e2.rho_half_deg,
                    e1.t_deg + e2.t_deg,
                    e1.q_neg_twice_exp + e2.q_neg_twice_exp,
                    e1.log_deg + e2.log_deg,
                );
                out.push(e, c1 * c2);
            }
        }
        out
    }

    pub fn differentiate(&self, dir: Direction) -> Self {
        match dir {
            Direction::InvRhoDRho => self.inv_rho_d_rho(),
            Direction::DRhoRho => self.d_rho_rho(),
            Direction::DT => self.d_t(),
            Direction::DTT => self.d_t().d_t(),
        }
    }

    /// `(1/rho) d/drho`.
    pub fn inv_rho_d_rho(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.rho_half_deg > 0 {
                let f = ExactScalar::int(2 * e.rho_half_deg as i64);
                out.push(Exponents { rho_half_deg: e.rho_half_deg - 1, ..*e }, c * &f);
            }
            let shifted = Exponents { q_neg_twice_exp: e.q_neg_twice_exp + 2, ..*e };
            if e.q_neg_twice_exp != 0 {
                let f = ExactScalar::int(-(e.q_neg_twice_exp as i64));
                out.push(shifted, c * &f);
            }
            if e.log_deg > 0 {
                let f = ExactScalar::int(2 * e.log_deg as i64);
                out.push(Exponents { log_deg: e.log_deg - 1, ..shifted }, c * &f);
            }
        }
        out
    }

    /// `d^2/drho^2 = D + rho^2 D^2` with `D = (1/rho) d/drho`.
    pub fn d_rho_rho(&self) -> Self {
        let d = self.inv_rho_d_rho();
        let dd = d.inv_rho_d_rho().multiply(&Self::rho2());
        &d + &dd
    }

    /// `d/dt`.
    pub fn d_t(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.t_deg > 0 {
                let f = ExactScalar::int(e.t_deg as i64);
                out.push(Exponents { t_deg: e.t_deg - 1, ..*e }, c * &f);
            }
            // dQ/dt = 2(1+t), split into the t^k and t^(k+1) pieces.
            let shifted = Exponents { q_neg_twice_exp: e.q_neg_twice_exp + 2, ..*e };
            if e.q_neg_twice_exp != 0 {
                let f = ExactScalar::int(-(e.q_neg_twice_exp as i64));
                let cf = c * &f;
                out.push(shifted, cf.clone());
                out.push(Exponents { t_deg: e.t_deg + 1, ..shifted }, cf);
            }
            if e.log_deg > 0 {
                let f = ExactScalar::int(2 * e.log_deg as i64);
                let cf = c * &f;
                let lower = Exponents { log_deg: e.log_deg - 1, ..shifted };
                out.push(lower, cf.clone());
                out.push(Exponents { t_deg: e.t_deg + 1, ..lower }, cf);
            }
        }
        out
    }

    pub fn d_tt(&self) -> Self {
        self.d_t().d_t()
    }

    /// Laplacian in the `n-1` boundary variables for a radial function,
    /// `d_rho_rho + (n-2)/rho d_rho`.
    pub fn boundary_laplacian(&self, n: u32) -> Self {
        let k = ExactScalar::int(n as i64 - 2);
        &self.d_rho_rho() + &self.inv_rho_d_rho().scale(&k)
    }

    /// Radial part of `Delta(H * p)` in `R^n` for a harmonic factor `H` of degree `d`:
    /// `p_rhorho + (n-2+2d) (1/rho) p_rho + p_tt`.
    pub fn laplacian_harmonic(&self, factor: HarmonicFactor, n: u32) -> Result<Self, ProfileError> {
        if n < 5 {
            return Err(ProfileError::DimensionTooSmall(n));
        }
        let k = ExactScalar::int(n as i64 - 2 + 2 * factor.degree() as i64);
        Ok(&(&self.d_rho_rho() + &self.inv_rho_d_rho().scale(&k)) + &self.d_tt())
    }

    /// Sets `t = 0`; `Q` then reads as `1 + rho^2`.
    pub fn restrict_boundary(&self) -> Self {
        Self {
            terms: self.terms.iter().filter(|(e, _)| e.t_deg == 0).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// `p^(num/den)` for `p = Q^(-s/2)` with unit coefficient.
    pub fn q_power_pow(&self, num: i64, den: i64) -> Result<Self, ProfileError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero.into());
        }
        let mut it = self.terms.iter();
        let (e, c) = match (it.next(), it.next()) {
            (Some(x), None) => x,
            _ => return Err(ProfileError::UnsupportedPower),
        };
        if !c.is_one() || e.rho_half_deg != 0 || e.t_deg != 0 || e.log_deg != 0 {
            return Err(ProfileError::UnsupportedPower);
        }
        let s = e.q_neg_twice_exp as i64 * num;
        if s % den != 0 {
            return Err(ProfileError::UnsupportedPower);
        }
        Ok(Self::q_pow((s / den) as i32))
    }

    /// Evaluation at a point, generic over dual numbers. Takes `rho^2` rather than `rho`.
    pub fn eval_dual<D: DualNum<Primitive = f64> + Copy>(&self, rho_sq: D, t: D) -> D {
        let one_t = t + 1.0;
        let q = rho_sq + one_t * one_t;
        let needs_log = self.terms.keys().any(|e| e.log_deg > 0);
        let lq = if needs_log { q.ln() } else { D::zero() };
        let mut acc = D::zero();
        for (e, c) in &self.terms {
            let mut v = D::one() * c.to_f64();
            if e.rho_half_deg > 0 {
                v *= rho_sq.powi(e.rho_half_deg as i32);
            }
            if e.t_deg > 0 {
                v *= t.powi(e.t_deg as i32);
            }
            if e.q_neg_twice_exp != 0 {
                v *= q_power(q, e.q_neg_twice_exp);
            }
            if e.log_deg > 0 {
                v *= lq.powi(e.log_deg as i32);
            }
            acc += v;
        }
        acc
    }

    /// Plain double evaluation.
    pub fn eval(&self, rho: f64, t: f64) -> f64 {
        self.eval_dual(rho * rho, t)
    }

    pub fn eval_numeric(&self, rho: f64, t: f64, precision_bits: u32) -> Result<f64, ProfileError> {
        if precision_bits > MAX_PRECISION_BITS {
            return Err(ProfileError::PrecisionUnsupported { requested: precision_bits, max: MAX_PRECISION_BITS });
        }
        if !(rho >= 0.0 && t >= 0.0) {
            return Err(ProfileError::OutsideDomain { rho, t });
        }
        let v = self.eval(rho, t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ProfileError::Overflow { rho, t })
        }
    }

    /// `p(rho, t) * rho^w` evaluated through logarithms so that far quadrature
    /// nodes neither overflow nor produce `inf * 0`.
    pub fn eval_scaled(&self, rho: f64, t: f64, w: i32) -> f64 {
        let ln_rho = rho.ln();
        let ln_t = t.ln();
        let q = rho * rho + (1.0 + t) * (1.0 + t);
        let ln_q = q.ln();
        let lq = ln_q;
        let mut acc = 0.0;
        let mut comp = 0.0;
        for (e, c) in &self.terms {
            let mut x = 0.0;
            let rho_pow = 2 * e.rho_half_deg as i32 + w;
            if rho_pow != 0 {
                x += rho_pow as f64 * ln_rho;
            }
            if e.t_deg > 0 {
                x += e.t_deg as f64 * ln_t;
            }
            if e.q_neg_twice_exp != 0 {
                x -= 0.5 * e.q_neg_twice_exp as f64 * ln_q;
            }
            let mut v = c.to_f64() * x.exp();
            if e.log_deg > 0 {
                v *= lq.powi(e.log_deg as i32);
            }
            // Neumaier summation keeps cancelling terms accurate.
            let s = acc + v;
            if acc.abs() >= v.abs() {
                comp += (acc - s) + v;
            } else {
                comp += (v - s) + acc;
            }
            acc = s;
        }
        acc + comp
    }
}

fn binomial(n: u32, k: u32) -> num_bigint::BigInt {
    let mut r = num_bigint::BigInt::from(1);
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn q_power<D: DualNum<Primitive = f64> + Copy>(q: D, s: i32) -> D {
    if s % 2 == 0 {
        q.powi(-s / 2)
    } else {
        q.powf(-0.5 * s as f64)
    }
}

impl<'a> Add<&'a RadialProfile> for &'a RadialProfile {
    type Output = RadialProfile;
    fn add(self, rhs: &'a RadialProfile) -> RadialProfile {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(*e, c.clone());
        }
        out
    }
}

impl Add for RadialProfile {
    type Output = RadialProfile;
    fn add(self, rhs: RadialProfile) -> RadialProfile {
        &self + &rhs
    }
}

impl<'a> Sub<&'a RadialProfile> for &'a RadialProfile {
    type Output = RadialProfile;
    fn sub(self, rhs: &'a RadialProfile) -> RadialProfile {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(*e, -c);
        }
        out
    }
}

impl Sub for RadialProfile {
    type Output = RadialProfile;
    fn sub(self, rhs: RadialProfile) -> RadialProfile {
        &self - &rhs
    }
}

impl<'a> Mul<&'a RadialProfile> for &'a RadialProfile {
    type Output = RadialProfile;
    fn mul(self, rhs: &'a RadialProfile) -> RadialProfile {
        self.multiply(rhs)
    }
}

impl Mul for RadialProfile {
    type Output = RadialProfile;
    fn mul(self, rhs: RadialProfile) -> RadialProfile {
        self.multiply(&rhs)
    }
}

impl Neg for &RadialProfile {
    type Output = RadialProfile;
    fn neg(self) -> RadialProfile {
        self.scale(&ExactScalar::int(-1))
    }
}

impl Neg for RadialProfile {
    type Output = RadialProfile;
    fn neg(self) -> RadialProfile {
        -&self
    }
}

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "{} * rho^{} * t^{} * Q^({}/2) * logQ^{}",
                c.to_pq_string(),
                2 * e.rho_half_deg,
                e.t_deg,
                -e.q_neg_twice_exp,
                e.log_deg
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RadialProfile {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for chunk in s.split(" + ") {
            let (c, e) = parse_term(chunk).ok_or_else(|| ProfileError::Parse(chunk.to_string()))?;
            p.push(e, c);
        }
        Ok(p)
    }
}

fn parse_term(chunk: &str) -> Option<(ExactScalar, Exponents)> {
    let parts: Vec<&str> = chunk.split(" * ").map(str::trim).collect();
    if parts.len() != 5 {
        return None;
    }
    let c: ExactScalar = parts[0].parse().ok()?;
    let rho: u32 = parts[1].strip_prefix("rho^")?.parse().ok()?;
    if rho % 2 != 0 {
        return None;
    }
    let k: u32 = parts[2].strip_prefix("t^")?.parse().ok()?;
    let qe = parts[3].strip_prefix("Q^(")?.strip_suffix("/2)")?;
    let x: i32 = qe.parse().ok()?;
    let l: u32 = parts[4].strip_prefix("logQ^")?.parse().ok()?;
    Some((c, Exponents::new(rho / 2, k, -x, l)))
}

impl Serialize for RadialProfile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RadialProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn a7() -> RadialProfile {
        // 1/12 Q^(-5/2) + 5/6 (1 + t^2 - t) Q^(-7/2)
        let poly = RadialProfile::t_poly(&[q(1, 1), q(-1, 1), q(1, 1)]);
        RadialProfile::q_pow(5).scale(&q(1, 12)) + poly.multiply(&RadialProfile::q_pow(7)).scale(&q(5, 6))
    }

    #[test]
    fn like_terms_merge() {
        let a = RadialProfile::q_pow(1);
        assert_eq!(&a + &a, RadialProfile::q_pow(1).scale(&q(2, 1)));
    }

    #[test]
    fn multiply_adds_exponents() {
        let a = RadialProfile::term(q(1, 1), 1, 0, 4, 0);
        let b = RadialProfile::term(q(1, 1), 0, 1, 3, 0);
        assert_eq!(a.multiply(&b), RadialProfile::term(q(1, 1), 1, 1, 7, 0));
    }

    #[test]
    fn scale_by_zero_annihilates() {
        assert!(RadialProfile::bubble(6).scale(&ExactScalar::zero()).is_empty());
    }

    #[test]
    fn d_t_of_inverse_sqrt_q() {
        let d = RadialProfile::q_pow(1).d_t();
        let expect = RadialProfile::t_poly(&[q(-1, 1), q(-1, 1)]).multiply(&RadialProfile::q_pow(3));
        assert_eq!(d, expect);
    }

    #[test]
    fn inv_rho_d_rho_of_rho2_power() {
        let s = 7;
        let p = RadialProfile::term(q(1, 1), 1, 0, s, 0);
        let expect = RadialProfile::term(q(2, 1), 0, 0, s, 0) + RadialProfile::term(q(-7, 1), 1, 0, s + 2, 0);
        assert_eq!(p.inv_rho_d_rho(), expect);
    }

    #[test]
    fn a7_boundary_derivative() {
        let d = a7().d_t().restrict_boundary();
        let expect = RadialProfile::q_pow(7).scale(&q(-5, 4)) + RadialProfile::q_pow(9).scale(&q(-35, 6));
        assert_eq!(d, expect);
    }

    #[test]
    fn a7_restriction() {
        let r = a7().restrict_boundary();
        let expect = RadialProfile::q_pow(5).scale(&q(1, 12)) + RadialProfile::q_pow(7).scale(&q(5, 6));
        assert_eq!(r, expect);
    }

    #[test]
    fn restrict_drops_t_terms() {
        assert!(RadialProfile::term(q(1, 1), 0, 1, 6, 0).restrict_boundary().is_empty());
    }

    #[test]
    fn bubble_is_harmonic() {
        for n in 5..=9 {
            let l = RadialProfile::bubble(n).laplacian_harmonic(HarmonicFactor::Scalar, n).unwrap();
            assert!(l.is_zero(), "n = {n}: {l}");
        }
    }

    #[test]
    fn q_relation_is_equality() {
        let lhs = RadialProfile::term(q(1, 1), 1, 0, 5, 0) + RadialProfile::t_poly(&[q(1, 1), q(2, 1), q(1, 1)]).multiply(&RadialProfile::q_pow(5));
        assert_eq!(lhs, RadialProfile::q_pow(3));
        assert_ne!(lhs.len(), 1);
        assert!(lhs.reduced().entries().all(|(e, _)| e.rho_half_deg == 0));
    }

    #[test]
    fn constant_is_harmonic() {
        let l = RadialProfile::one().laplacian_harmonic(HarmonicFactor::Scalar, 7).unwrap();
        assert!(l.is_zero());
    }

    #[test]
    fn closed_form_q_power_laplacian() {
        for n in 5..=8u32 {
            for f in [HarmonicFactor::Scalar, HarmonicFactor::RnPair, HarmonicFactor::RiemQuad] {
                for s in -3..12 {
                    let l = RadialProfile::q_pow(s).laplacian_harmonic(f, n).unwrap();
                    let c = s as i64 * (s as i64 - (n as i64 - 2 + 2 * f.degree() as i64));
                    assert_eq!(l, RadialProfile::q_pow(s + 2).scale(&ExactScalar::int(c)));
                }
            }
        }
    }

    #[test]
    fn quartic_factor_identity() {
        let n = 7;
        let b = RadialProfile::q_pow(n as i32).scale(&q(n as i64 - 2, 6));
        let rhs = RadialProfile::q_pow(n as i32 + 2).scale(&ExactScalar::int((n * (n - 2)) as i64));
        let l = b.laplacian_harmonic(HarmonicFactor::RiemQuad, n).unwrap();
        assert!((&l + &rhs).is_zero());
    }

    #[test]
    fn small_dimension_rejected() {
        assert!(RadialProfile::one().laplacian_harmonic(HarmonicFactor::Scalar, 4).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(RadialProfile::bubble(6).eval_numeric(0.0, 0.0, 53).unwrap(), 1.0);
        let v = RadialProfile::q_pow(1).eval_numeric(3.0, 0.0, 53).unwrap();
        assert!((v - 1.0 / 10f64.sqrt()).abs() < 1e-16);
        let direct = 5f64.powf(-2.5) / 12.0 + 5.0 / 6.0 * 5f64.powf(-3.5);
        assert!((a7().eval(1.0, 1.0) - direct).abs() < 1e-16);
    }

    #[test]
    fn precision_overflow_is_error() {
        assert!(matches!(
            RadialProfile::one().eval_numeric(1.0, 1.0, 113),
            Err(ProfileError::PrecisionUnsupported { .. })
        ));
        assert!(RadialProfile::one().eval_numeric(-1.0, 1.0, 53).is_err());
    }

    #[test]
    fn log_derivative() {
        // d/dt log Q = 2(1+t)/Q
        let d = RadialProfile::log_q().d_t();
        let expect = RadialProfile::t_poly(&[q(2, 1), q(2, 1)]).multiply(&RadialProfile::q_pow(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn scaled_matches_plain() {
        let p = a7();
        for &(r, t) in &[(0.3, 0.2), (2.0, 5.0), (10.0, 0.01)] {
            let a = p.eval_scaled(r, t, 5);
            let b = p.eval(r, t) * r.powi(5);
            assert!((a - b).abs() <= 1e-13 * b.abs());
        }
        assert!(p.eval_scaled(1e17, 1e17, 9).is_finite());
    }

    #[test]
    fn text_round_trip() {
        let p = a7() + RadialProfile::log_q().scale(&q(-1, 12)) + RadialProfile::term(q(3, 7), 2, 1, -3, 0);
        let s = p.to_string();
        assert_eq!(s.parse::<RadialProfile>().unwrap(), p);
        assert_eq!(RadialProfile::zero().to_string(), "0");
        assert!(s.contains("1/12 * rho^0 * t^0 * Q^(-5/2) * logQ^0"));
    }

    #[test]
    fn q_power_pow() {
        let u = RadialProfile::bubble(7);
        assert_eq!(u.q_power_pow(7, 5).unwrap(), RadialProfile::q_pow(7));
        assert_eq!(u.q_power_pow(2, 5).unwrap(), RadialProfile::q_pow(2));
        assert!(a7().q_power_pow(1, 2).is_err());
        assert!(RadialProfile::bubble(8).q_power_pow(1, 4).is_err());
    }
}
