//! Contractions of boundary curvature tensors with coordinate monomials under
//! radial weights, reduced to the scalars `|W|^2`, `R_ninj^2` and `R_ninj,ij`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moments::{boundary_moment, halfspace_moment, truncated_log_moment, MomentError, MomentValue, TruncationSpec};
use crate::profile::RadialProfile;
use crate::quadrature::{
    gamma_half_f64, integrate_profile_box, integrate_profile_quadrant, integrate_profile_ray, QuadError, QuadratureSpec,
};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("no reduction rule for tensor slots {0:?}")]
    UnsupportedPattern(Vec<Slot>),
    #[error("dimension n = {0} is below the supported minimum 5")]
    DimensionTooSmall(u32),
    #[error("sample dimension {sample} does not match pattern dimension {pattern}")]
    DimensionMismatch { sample: u32, pattern: u32 },
    #[error("weight is not integrable against the pattern monomial")]
    Divergent,
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Tensor slot of a contraction; every index is paired with a boundary coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    /// `R_ninj y_i y_j`
    Rn,
    /// `R_ikjl y_i y_k y_j y_l` on the boundary
    Riem,
    /// `R_ninj,kl y_i y_j y_k y_l`
    RnDeriv,
}

impl Slot {
    pub fn degree(self) -> u32 {
        match self {
            Slot::Rn => 2,
            Slot::Riem | Slot::RnDeriv => 4,
        }
    }
}

/// Where the weight is integrated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightDomain {
    /// `int_{R^{n-1}} f(|ybar|) ... dybar`, weight must be `t` free
    Boundary,
    /// `int_{R^n_+} f(|ybar|, t) ... dy`
    HalfSpace,
    /// `log(1/delta)` coefficient over the cylinder of half side `r/delta`
    Cylinder(TruncationSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionPattern {
    pub slots: Vec<Slot>,
    pub weight: RadialProfile,
    pub domain: WeightDomain,
}

impl ContractionPattern {
    pub fn new(slots: Vec<Slot>, weight: RadialProfile, domain: WeightDomain) -> Self {
        Self { slots, weight, domain }
    }

    /// Left hand side of the `k`-th symmetry identity, `k` in `1..=5`.
    pub fn sym(k: u32, weight: RadialProfile, domain: WeightDomain) -> Option<Self> {
        let slots = match k {
            1 => vec![Slot::Rn],
            2 => vec![Slot::Riem],
            3 => vec![Slot::Rn, Slot::Riem],
            4 => vec![Slot::Riem, Slot::Riem],
            5 => vec![Slot::Rn, Slot::Rn],
            _ => return None,
        };
        Some(Self::new(slots, weight, domain))
    }

    pub fn monomial_degree(&self) -> u32 {
        self.slots.iter().map(|s| s.degree()).sum()
    }

    fn sorted_slots(&self) -> Vec<Slot> {
        let mut s = self.slots.clone();
        s.sort();
        s
    }
}

/// Combination `wbar_sq * |W|^2 + rn_sq * R_ninj^2 + rn_div * R_ninj,ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureScalar {
    pub wbar_sq: MomentValue,
    pub rn_sq: MomentValue,
    pub rn_div: MomentValue,
}

impl Default for CurvatureScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl CurvatureScalar {
    pub fn zero() -> Self {
        Self { wbar_sq: MomentValue::zero(), rn_sq: MomentValue::zero(), rn_div: MomentValue::zero() }
    }

    pub fn wbar(v: MomentValue) -> Self {
        Self { wbar_sq: v, ..Self::zero() }
    }

    pub fn rn(v: MomentValue) -> Self {
        Self { rn_sq: v, ..Self::zero() }
    }

    pub fn div(v: MomentValue) -> Self {
        Self { rn_div: v, ..Self::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.wbar_sq.is_zero() && self.rn_sq.is_zero() && self.rn_div.is_zero()
    }

    pub fn add(&self, o: &Self) -> Result<Self, MomentError> {
        Ok(Self {
            wbar_sq: self.wbar_sq.add(&o.wbar_sq)?,
            rn_sq: self.rn_sq.add(&o.rn_sq)?,
            rn_div: self.rn_div.add(&o.rn_div)?,
        })
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self { wbar_sq: self.wbar_sq.scale(c), rn_sq: self.rn_sq.scale(c), rn_div: self.rn_div.scale(c) }
    }

    /// Numeric value for the scalars of a concrete sample.
    pub fn evaluate(&self, sample: &ConcreteCurvatureSample) -> Result<f64, MomentError> {
        let mut v = 0.0;
        for (m, s) in [(&self.wbar_sq, sample.wbar_sq()), (&self.rn_sq, sample.rn_sq()), (&self.rn_div, sample.rn_div())] {
            if !m.is_zero() {
                v += m.numeric_value()? * s.to_f64();
            }
        }
        Ok(v)
    }
}

impl fmt::Display for CurvatureScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [(&self.wbar_sq, "|W|^2"), (&self.rn_sq, "R_ninj^2"), (&self.rn_div, "R_ninj,ij")]
            .iter()
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, name)| format!("({m}) * {name}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn weight_moment(weight: &RadialProfile, extra: u32, n: u32, domain: &WeightDomain) -> Result<MomentValue, MomentError> {
    match domain {
        WeightDomain::Boundary => boundary_moment(weight, extra, n),
        WeightDomain::HalfSpace => halfspace_moment(weight, extra, n),
        WeightDomain::Cylinder(tr) => truncated_log_moment(weight, extra, n, tr),
    }
}

/// Exact reduction of a contraction to the scalar basis.
pub fn reduce_contraction(pat: &ContractionPattern, n: u32) -> Result<CurvatureScalar, CurvatureError> {
    if n < 5 {
        return Err(CurvatureError::DimensionTooSmall(n));
    }
    let slots = pat.sorted_slots();
    // int f y_i y_j y_k y_l = (d_ij d_kl + d_ik d_jl + d_il d_jk) int f |y|^4 / (n^2 - 1)
    let quartic = || -> Result<MomentValue, CurvatureError> {
        let m4 = weight_moment(&pat.weight, 4, n, &pat.domain)?;
        if m4.is_divergent() {
            return Err(CurvatureError::Divergent);
        }
        Ok(m4.scale(&ExactScalar::ratio(2, (n as i64).pow(2) - 1)))
    };
    match slots.as_slice() {
        [Slot::Rn] | [Slot::Riem] | [Slot::Rn, Slot::Riem] | [Slot::Riem, Slot::Riem] => Ok(CurvatureScalar::zero()),
        [Slot::Rn, Slot::Rn] => Ok(CurvatureScalar::rn(quartic()?)),
        [Slot::RnDeriv] => Ok(CurvatureScalar::div(quartic()?)),
        _ => Err(CurvatureError::UnsupportedPattern(pat.slots.clone())),
    }
}

/// Random curvature data at a boundary point, exact and satisfying the
/// trace conditions `R_nini = 0`, `R_ikil = 0`, `sum R_nini,kk = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteCurvatureSample {
    pub n: u32,
    pub seed: u64,
    /// `R_ninj`, row major `N x N` with `N = n - 1`
    pub rn: Vec<ExactScalar>,
    /// `R_ikjl` of the boundary, `N^4`
    pub riem: Vec<ExactScalar>,
    /// `R_ninj,kl`, `N^4`, symmetric in `(i, j)`
    pub rn_deriv: Vec<ExactScalar>,
}

fn idx2(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

fn idx4(d: usize, a: usize, b: usize, c: usize, e: usize) -> usize {
    ((a * d + b) * d + c) * d + e
}

fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> Vec<ExactScalar> {
    let mut m = vec![ExactScalar::zero(); d * d];
    for i in 0..d {
        for j in i..d {
            let v = ExactScalar::int(rng.random_range(-9..=9));
            m[idx2(d, i, j)] = v.clone();
            m[idx2(d, j, i)] = v;
        }
    }
    m
}

/// Kulkarni-Nomizu product `h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad`.
fn kulkarni_nomizu(h: &[ExactScalar], k: &[ExactScalar], d: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); d.pow(4)];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    out[idx4(d, a, b, c, e)] = &h[idx2(d, a, c)] * &k[idx2(d, b, e)]
                        + &h[idx2(d, b, e)] * &k[idx2(d, a, c)]
                        - &h[idx2(d, a, e)] * &k[idx2(d, b, c)]
                        - &h[idx2(d, b, c)] * &k[idx2(d, a, e)];
                }
            }
        }
    }
    out
}

impl ConcreteCurvatureSample {
    pub fn random(n: u32, seed: u64) -> Result<Self, CurvatureError> {
        if n < 5 {
            return Err(CurvatureError::DimensionTooSmall(n));
        }
        let d = n as usize - 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut rn = random_symmetric(&mut rng, d);
        let tr: ExactScalar = (0..d).map(|i| rn[idx2(d, i, i)].clone()).sum();
        let shift = tr.checked_div(&ExactScalar::int(d as i64)).expect("d > 0");
        for i in 0..d {
            rn[idx2(d, i, i)] -= &shift;
        }

        let mut r = vec![ExactScalar::zero(); d.pow(4)];
        for _ in 0..2 {
            let h = random_symmetric(&mut rng, d);
            let k = random_symmetric(&mut rng, d);
            for (x, y) in r.iter_mut().zip(kulkarni_nomizu(&h, &k, d)) {
                *x += y;
            }
        }
        let riem = weyl_part(&r, d);

        let mut rn_deriv = vec![ExactScalar::zero(); d.pow(4)];
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = ExactScalar::int(rng.random_range(-9..=9));
                        rn_deriv[idx4(d, i, j, k, l)] = v.clone();
                        rn_deriv[idx4(d, j, i, k, l)] = v;
                    }
                }
            }
        }
        let tau: ExactScalar = (0..d)
            .flat_map(|i| (0..d).map(move |k| (i, k)))
            .map(|(i, k)| rn_deriv[idx4(d, i, i, k, k)].clone())
            .sum();
        let shift = tau.checked_div(&ExactScalar::int((d * d) as i64)).expect("d > 0");
        for i in 0..d {
            for k in 0..d {
                rn_deriv[idx4(d, i, i, k, k)] -= &shift;
            }
        }
        Ok(Self { n, seed, rn, riem, rn_deriv })
    }

    /// Boundary dimension `n - 1`.
    pub fn dim(&self) -> usize {
        self.n as usize - 1
    }

    pub fn rn_at(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rn[idx2(self.dim(), i, j)]
    }

    pub fn riem_at(&self, a: usize, b: usize, c: usize, e: usize) -> &ExactScalar {
        &self.riem[idx4(self.dim(), a, b, c, e)]
    }

    pub fn deriv_at(&self, i: usize, j: usize, k: usize, l: usize) -> &ExactScalar {
        &self.rn_deriv[idx4(self.dim(), i, j, k, l)]
    }

    pub fn rn_sq(&self) -> ExactScalar {
        self.rn.iter().map(|x| x * x).sum()
    }

    pub fn wbar_sq(&self) -> ExactScalar {
        self.riem.iter().map(|x| x * x).sum()
    }

    pub fn rn_div(&self) -> ExactScalar {
        let d = self.dim();
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| self.deriv_at(i, j, i, j).clone()).sum()
    }

    /// Largest absolute trace among `R_nini`, `R_ikil` and `sum R_nini,kk`.
    pub fn trace_residual(&self) -> ExactScalar {
        let d = self.dim();
        let mut worst: ExactScalar = (0..d).map(|i| self.rn_at(i, i).clone()).sum::<ExactScalar>().abs();
        for k in 0..d {
            for l in 0..d {
                let s: ExactScalar = (0..d).map(|i| self.riem_at(i, k, i, l).clone()).sum();
                worst = worst.max(s.abs());
            }
        }
        let tau: ExactScalar =
            (0..d).flat_map(|i| (0..d).map(move |k| (i, k))).map(|(i, k)| self.deriv_at(i, i, k, k).clone()).sum();
        worst.max(tau.abs())
    }

    /// Largest absolute first Bianchi sum `R_abcd + R_acdb + R_adbc`.
    pub fn bianchi_residual(&self) -> ExactScalar {
        let d = self.dim();
        let mut worst = ExactScalar::zero();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let s = self.riem_at(a, b, c, e) + self.riem_at(a, c, e, b) + self.riem_at(a, e, b, c);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of the pair symmetries of `R_ninj`, `R_ikjl` and `R_ninj,kl`.
    pub fn symmetry_residual(&self) -> ExactScalar {
        let d = self.dim();
        let mut worst = ExactScalar::zero();
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.rn_at(i, j) - self.rn_at(j, i)).abs());
                for k in 0..d {
                    for l in 0..d {
                        let r = self.riem_at(i, j, k, l);
                        worst = worst.max((r + self.riem_at(j, i, k, l)).abs());
                        worst = worst.max((r + self.riem_at(i, j, l, k)).abs());
                        worst = worst.max((r - self.riem_at(k, l, i, j)).abs());
                        worst = worst.max((self.deriv_at(i, j, k, l) - self.deriv_at(j, i, k, l)).abs());
                    }
                }
            }
        }
        worst
    }

    fn slot_polynomial(&self, slot: Slot) -> Poly {
        let d = self.dim();
        let mut p = Poly::default();
        match slot {
            Slot::Rn => {
                for i in 0..d {
                    for j in 0..d {
                        p.add_term(d, &[i, j], self.rn_at(i, j).to_f64());
                    }
                }
            }
            Slot::Riem | Slot::RnDeriv => {
                let src = if slot == Slot::Riem { &self.riem } else { &self.rn_deriv };
                for a in 0..d {
                    for b in 0..d {
                        for c in 0..d {
                            for e in 0..d {
                                p.add_term(d, &[a, b, c, e], src[idx4(d, a, b, c, e)].to_f64());
                            }
                        }
                    }
                }
            }
        }
        p
    }
}

/// Weyl projection of an algebraic curvature tensor in dimension `d`.
fn weyl_part(r: &[ExactScalar], d: usize) -> Vec<ExactScalar> {
    let mut ric = vec![ExactScalar::zero(); d * d];
    for b in 0..d {
        for e in 0..d {
            ric[idx2(d, b, e)] = (0..d).map(|a| r[idx4(d, a, b, a, e)].clone()).sum();
        }
    }
    let scal: ExactScalar = (0..d).map(|i| ric[idx2(d, i, i)].clone()).sum();
    let mut g = vec![ExactScalar::zero(); d * d];
    for i in 0..d {
        g[idx2(d, i, i)] = ExactScalar::one();
    }
    let dd = d as i64;
    let c1 = ExactScalar::ratio(1, dd - 2);
    let c2 = &scal * &ExactScalar::ratio(1, 2 * (dd - 1) * (dd - 2));
    let rg = kulkarni_nomizu(&ric, &g, d);
    let gg = kulkarni_nomizu(&g, &g, d);
    r.iter().zip(rg.iter().zip(&gg)).map(|(x, (y, z))| x - &(y * &c1) + z * &c2).collect()
}

/// Sparse polynomial in the boundary coordinates.
#[derive(Debug, Clone, Default)]
struct Poly(BTreeMap<Vec<u8>, f64>);

impl Poly {
    fn add_term(&mut self, d: usize, indices: &[usize], c: f64) {
        if c == 0.0 {
            return;
        }
        let mut e = vec![0u8; d];
        for &i in indices {
            e[i] += 1;
        }
        *self.0.entry(e).or_insert(0.0) += c;
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert(0.0) += c1 * c2;
            }
        }
        Poly(out)
    }
}

/// `int_{S^{d-1}} y^alpha` with `d = alpha.len()`.
pub fn sphere_monomial(alpha: &[u8]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let deg: u32 = alpha.iter().map(|&a| a as u32).sum();
    let num: f64 = alpha.iter().map(|&a| gamma_half_f64(a as u32 + 1)).product();
    2.0 * num / gamma_half_f64(deg + alpha.len() as u32)
}

/// Brute force value of a contraction for a concrete sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericContraction {
    pub value: f64,
    /// Sum of the absolute contributions, the natural size of `value`.
    pub scale: f64,
    pub error_bound: f64,
}

/// Expands the monomial, integrates it over the sphere and multiplies by the
/// radial quadrature of the weight. For a cylinder domain the value is the
/// truncated integral itself, not its log coefficient.
pub fn numeric_contract(
    pat: &ContractionPattern,
    sample: &ConcreteCurvatureSample,
    spec: &QuadratureSpec,
) -> Result<NumericContraction, CurvatureError> {
    let n = sample.n;
    let deg = pat.monomial_degree();
    match &pat.domain {
        WeightDomain::Boundary | WeightDomain::HalfSpace => {
            if weight_moment(&pat.weight, deg, n, &pat.domain)?.is_divergent() {
                return Err(CurvatureError::Divergent);
            }
        }
        WeightDomain::Cylinder(_) => {}
    }
    let mut poly = Poly(BTreeMap::from([(vec![0u8; sample.dim()], 1.0)]));
    for &s in &pat.slots {
        poly = poly.mul(&sample.slot_polynomial(s));
    }
    let mut ang = crate::par::CompensatedSum::default();
    let mut ang_abs = 0.0;
    for (e, c) in &poly.0 {
        let v = c * sphere_monomial(e);
        ang.add(v);
        ang_abs += v.abs();
    }
    let w = (n - 2 + deg) as i32;
    let radial = match &pat.domain {
        WeightDomain::Boundary => integrate_profile_ray(&pat.weight, w, spec)?,
        WeightDomain::HalfSpace => integrate_profile_quadrant(&pat.weight, w, spec)?,
        WeightDomain::Cylinder(tr) => integrate_profile_box(&pat.weight, w, tr.radius(), spec)?,
    };
    Ok(NumericContraction {
        value: ang.value() * radial.value,
        scale: ang_abs * radial.value.abs(),
        error_bound: ang.value().abs() * radial.error_bound + ang_abs * radial.value.abs() * 64.0 * f64::EPSILON,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn weight7() -> RadialProfile {
        RadialProfile::q_pow(13) + RadialProfile::term(q(1, 3), 1, 0, 15, 0)
    }

    #[test]
    fn sample_invariants_exact() {
        for (n, seed) in [(6, 1), (7, 2), (5, 9)] {
            let s = ConcreteCurvatureSample::random(n, seed).unwrap();
            assert!(s.trace_residual().is_zero());
            assert!(s.bianchi_residual().is_zero());
            assert!(s.symmetry_residual().is_zero());
            assert!(!s.wbar_sq().is_zero());
        }
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(ConcreteCurvatureSample::random(6, 4).unwrap(), ConcreteCurvatureSample::random(6, 4).unwrap());
        assert_ne!(ConcreteCurvatureSample::random(6, 4).unwrap(), ConcreteCurvatureSample::random(6, 5).unwrap());
    }

    #[test]
    fn vanishing_patterns() {
        for k in 1..=4 {
            let p = ContractionPattern::sym(k, weight7(), WeightDomain::Boundary).unwrap();
            assert!(reduce_contraction(&p, 7).unwrap().is_zero());
        }
    }

    #[test]
    fn sym5_factor() {
        let p = ContractionPattern::sym(5, weight7(), WeightDomain::Boundary).unwrap();
        let r = reduce_contraction(&p, 7).unwrap();
        let m4 = boundary_moment(&weight7(), 4, 7).unwrap();
        assert_eq!(r.rn_sq, m4.scale(&q(1, 24)));
        assert!(r.wbar_sq.is_zero() && r.rn_div.is_zero());
    }

    #[test]
    fn unsupported_shape() {
        let p = ContractionPattern::new(vec![Slot::Rn, Slot::RnDeriv], weight7(), WeightDomain::Boundary);
        assert!(matches!(reduce_contraction(&p, 7), Err(CurvatureError::UnsupportedPattern(_))));
    }

    #[test]
    fn sphere_moments() {
        // |S^1| = 2 pi, int_{S^2} x^2 = 4 pi / 3
        assert!((sphere_monomial(&[0, 0]) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((sphere_monomial(&[2, 0, 0]) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        let a = sphere_monomial(&[4, 0, 0, 0, 0]);
        let b = sphere_monomial(&[2, 2, 0, 0, 0]);
        assert!((a - 3.0 * b).abs() < 1e-14 * a);
    }

    #[test]
    fn sym5_numeric_matches() {
        let s = ConcreteCurvatureSample::random(6, 3).unwrap();
        let w = RadialProfile::q_pow(12);
        let p = ContractionPattern::sym(5, w, WeightDomain::Boundary).unwrap();
        let exact = reduce_contraction(&p, 6).unwrap().evaluate(&s).unwrap();
        let num = numeric_contract(&p, &s, &QuadratureSpec::default()).unwrap();
        assert!((num.value - exact).abs() <= 1e-8 * exact.abs(), "{} vs {}", num.value, exact);
    }

    #[test]
    fn divergent_weight_rejected() {
        let s = ConcreteCurvatureSample::random(6, 3).unwrap();
        let p = ContractionPattern::sym(1, RadialProfile::q_pow(4), WeightDomain::Boundary).unwrap();
        assert!(matches!(numeric_contract(&p, &s, &QuadratureSpec::default()), Err(CurvatureError::Divergent)));
    }
}
