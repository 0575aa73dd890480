//! Exact moments of radial profiles.
//!
//! Every reduction lands on a rational multiple of `w_{n-2} * I_m^alpha` with
//! `I_m^alpha = int_0^inf s^alpha (1+s^2)^(-m) ds`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{RadialProfile, MAX_PRECISION_BITS};
use crate::quadrature::omega_numeric;
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("I symbol with 2m = {twice_m}, alpha = {alpha} does not converge")]
    InvalidSymbol { twice_m: i64, alpha: i64 },
    #[error("profile contains log terms")]
    LogTerms,
    #[error("extra rho degree {0} is not even")]
    OddRhoDegree(u32),
    #[error("profile is not restricted to the boundary")]
    Unrestricted,
    #[error("term {term} diverges polynomially on the truncated cylinder")]
    PolynomialDivergence { term: String },
    #[error("values from different I lattice classes cannot be combined: {0} and {1}")]
    MixedClasses(String, String),
    #[error("moment kinds differ: {0:?} vs {1:?}")]
    KindMismatch(MomentKind, MomentKind),
    #[error("truncation needs 0 < delta < r")]
    InvalidTruncation,
    #[error("divergent moment has no numeric value")]
    Divergent,
    #[error("requested {requested} bits of precision, at most {max} are available")]
    PrecisionUnsupported { requested: u32, max: u32 },
    #[error("sphere factors w{0} and w{1} differ")]
    OmegaMismatch(u32, u32),
}

/// `I_m^alpha` with `m = twice_m / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ISymbol {
    pub twice_m: u32,
    pub alpha: u32,
}

impl ISymbol {
    pub fn new(twice_m: u32, alpha: u32) -> Result<Self, MomentError> {
        if alpha as u64 + 1 < twice_m as u64 {
            Ok(Self { twice_m, alpha })
        } else {
            Err(MomentError::InvalidSymbol { twice_m: twice_m as i64, alpha: alpha as i64 })
        }
    }

    /// `I_m^alpha` for integer `m`.
    pub fn int(m: u32, alpha: u32) -> Result<Self, MomentError> {
        Self::new(2 * m, alpha)
    }

    /// Lattice class: parities of `2m` and `alpha`. The recurrences never leave it.
    pub fn class(self) -> (u32, u32) {
        (self.twice_m % 2, self.alpha % 2)
    }

    /// Reference symbol of the class every value is expressed against.
    pub fn class_base(self) -> ISymbol {
        match self.class() {
            (0, 1) => ISymbol { twice_m: 14, alpha: 9 },
            (0, _) => ISymbol { twice_m: 16, alpha: 10 },
            (_, 1) => ISymbol { twice_m: 15, alpha: 9 },
            _ => ISymbol { twice_m: 15, alpha: 10 },
        }
    }
}

impl fmt::Display for ISymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_m % 2 == 0 {
            write!(f, "I({},{})", self.twice_m / 2, self.alpha)
        } else {
            write!(f, "I({}/2,{})", self.twice_m, self.alpha)
        }
    }
}

impl std::str::FromStr for ISymbol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().strip_prefix("I(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| s.to_string())?;
        let (m, a) = inner.split_once(',').ok_or_else(|| s.to_string())?;
        let twice_m = match m.split_once('/') {
            Some((p, "2")) => p.parse::<u32>().map_err(|e| e.to_string())?,
            Some(_) => return Err(s.to_string()),
            None => 2 * m.parse::<u32>().map_err(|e| e.to_string())?,
        };
        let alpha = a.parse::<u32>().map_err(|e| e.to_string())?;
        ISymbol::new(twice_m, alpha).map_err(|e| e.to_string())
    }
}

/// One application of a recurrence, moving between neighbouring symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceStep {
    RaiseM,
    LowerM,
    RaiseAlpha,
    LowerAlpha,
    RaiseBoth,
    LowerBoth,
}

impl RecurrenceStep {
    pub const ALL: [RecurrenceStep; 6] = [
        RecurrenceStep::RaiseM,
        RecurrenceStep::LowerM,
        RecurrenceStep::RaiseAlpha,
        RecurrenceStep::LowerAlpha,
        RecurrenceStep::RaiseBoth,
        RecurrenceStep::LowerBoth,
    ];
}

/// Applies `step` to `sym`, returning `(c, next)` with `I_sym = c * I_next`.
pub fn apply_step(sym: ISymbol, step: RecurrenceStep) -> Result<(ExactScalar, ISymbol), MomentError> {
    let m2 = sym.twice_m as i64;
    let a = sym.alpha as i64;
    let r = |p: i64, q: i64| ExactScalar::ratio(p, q);
    let (c, nm2, na) = match step {
        RecurrenceStep::RaiseM => (r(m2, m2 - a - 1), m2 + 2, a),
        RecurrenceStep::LowerM => {
            if a + 1 >= m2 - 2 {
                return Err(MomentError::InvalidSymbol { twice_m: m2 - 2, alpha: a });
            }
            (r(m2 - a - 3, m2 - 2), m2 - 2, a)
        }
        RecurrenceStep::RaiseAlpha => {
            if a + 3 >= m2 {
                return Err(MomentError::InvalidSymbol { twice_m: m2, alpha: a + 2 });
            }
            (r(m2 - a - 3, a + 1), m2, a + 2)
        }
        RecurrenceStep::LowerAlpha => {
            if a < 2 {
                return Err(MomentError::InvalidSymbol { twice_m: m2, alpha: a - 2 });
            }
            (r(a - 1, m2 - a - 1), m2, a - 2)
        }
        RecurrenceStep::RaiseBoth => (r(m2, a + 1), m2 + 2, a + 2),
        RecurrenceStep::LowerBoth => {
            if a < 2 {
                return Err(MomentError::InvalidSymbol { twice_m: m2 - 2, alpha: a - 2 });
            }
            (r(a - 1, m2 - 2), m2 - 2, a - 2)
        }
    };
    Ok((c, ISymbol::new(nm2 as u32, na as u32)?))
}

/// Exact ratio `I_from / I_to` for two symbols of the same class.
pub fn rebase(from: ISymbol, to: ISymbol) -> Result<ExactScalar, MomentError> {
    if from.class() != to.class() {
        return Err(MomentError::MixedClasses(from.to_string(), to.to_string()));
    }
    let mut cur = from;
    let mut c = ExactScalar::one();
    let mut walk = |cur: &mut ISymbol, step| -> Result<(), MomentError> {
        let (f, next) = apply_step(*cur, step)?;
        c *= f;
        *cur = next;
        Ok(())
    };
    // Raise m until both alphas are admissible, shift alpha, then descend.
    let need = from.alpha.max(to.alpha) + 2;
    while cur.twice_m < to.twice_m || cur.twice_m < need {
        walk(&mut cur, RecurrenceStep::RaiseM)?;
    }
    while cur.alpha < to.alpha {
        walk(&mut cur, RecurrenceStep::RaiseAlpha)?;
    }
    while cur.alpha > to.alpha {
        walk(&mut cur, RecurrenceStep::LowerAlpha)?;
    }
    while cur.twice_m > to.twice_m {
        walk(&mut cur, RecurrenceStep::LowerM)?;
    }
    debug_assert_eq!(cur, to);
    Ok(c)
}

/// `(c, base)` with `I_sym = c * I_base` and `base` the fixed reference of the class.
pub fn canonical_i(sym: ISymbol) -> Result<(ExactScalar, ISymbol), MomentError> {
    let sym = ISymbol::new(sym.twice_m, sym.alpha)?;
    let base = sym.class_base();
    Ok((rebase(sym, base)?, base))
}

/// `Gamma(x/2)` as `(rational, has_sqrt_pi)`.
fn gamma_half(x: u32) -> (BigRational, bool) {
    let mut v = BigRational::from_integer(BigInt::from(1));
    if x % 2 == 0 {
        for j in 1..x / 2 {
            v *= BigRational::from_integer(BigInt::from(j));
        }
        (v, false)
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(z+1) = z Gamma(z)
        let mut k = 1;
        while k < x {
            v *= BigRational::new(BigInt::from(k), BigInt::from(2));
            k += 2;
        }
        (v, true)
    }
}

/// Closed form `I_m^alpha = B(p, m-p)/2` with `p = (alpha+1)/2`, as
/// `(rational, pi_power)` meaning `rational * pi^pi_power`.
pub fn i_closed_form(sym: ISymbol) -> Result<(ExactScalar, u32), MomentError> {
    let sym = ISymbol::new(sym.twice_m, sym.alpha)?;
    let (g1, h1) = gamma_half(sym.alpha + 1);
    let (g2, h2) = gamma_half(sym.twice_m - sym.alpha - 1);
    let (g3, h3) = gamma_half(sym.twice_m);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let v = half * g1 * g2 / g3;
    let pi_twice = h1 as i32 + h2 as i32 - h3 as i32;
    debug_assert!(pi_twice == 0 || pi_twice == 2);
    Ok((ExactScalar::from_big(v), (pi_twice / 2) as u32))
}

pub fn i_numeric(sym: ISymbol, precision_bits: u32) -> Result<f64, MomentError> {
    if precision_bits > MAX_PRECISION_BITS {
        return Err(MomentError::PrecisionUnsupported { requested: precision_bits, max: MAX_PRECISION_BITS });
    }
    let (r, pi) = i_closed_form(sym)?;
    Ok(r.to_f64() * std::f64::consts::PI.powi(pi as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Finite,
    Divergent,
    LogAsymptotic,
}

/// `coeff * w_{omega} * I_basis`, optionally times `log(1/delta)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentValue {
    pub kind: MomentKind,
    pub coeff: ExactScalar,
    pub basis: Option<ISymbol>,
    /// Index `k` of the sphere factor `w_k`, when present.
    pub omega: Option<u32>,
}

impl MomentValue {
    pub fn zero() -> Self {
        Self { kind: MomentKind::Finite, coeff: ExactScalar::zero(), basis: None, omega: None }
    }

    pub fn rational(c: ExactScalar) -> Self {
        Self { kind: MomentKind::Finite, coeff: c, basis: None, omega: None }
    }

    pub fn divergent() -> Self {
        Self { kind: MomentKind::Divergent, coeff: ExactScalar::zero(), basis: None, omega: None }
    }

    /// `c * w_omega * I_sym`, canonicalized.
    pub fn of_symbol(kind: MomentKind, c: ExactScalar, sym: ISymbol, omega: Option<u32>) -> Result<Self, MomentError> {
        let (k, base) = canonical_i(sym)?;
        Ok(Self { kind, coeff: c * k, basis: Some(base), omega }.normalized())
    }

    fn normalized(self) -> Self {
        if self.coeff.is_zero() && self.kind != MomentKind::Divergent {
            Self { kind: self.kind, coeff: ExactScalar::zero(), basis: None, omega: None }
        } else {
            self
        }
    }

    pub fn carries_omega(&self) -> bool {
        self.omega.is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.kind != MomentKind::Divergent && self.coeff.is_zero()
    }

    pub fn is_divergent(&self) -> bool {
        self.kind == MomentKind::Divergent
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if self.is_divergent() {
            return self.clone();
        }
        Self { coeff: &self.coeff * c, ..self.clone() }.normalized()
    }

    pub fn add(&self, other: &Self) -> Result<Self, MomentError> {
        if self.is_divergent() || other.is_divergent() {
            return Ok(Self::divergent());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.kind != other.kind {
            return Err(MomentError::KindMismatch(self.kind, other.kind));
        }
        if self.omega != other.omega {
            return Err(MomentError::OmegaMismatch(self.omega.unwrap_or(0), other.omega.unwrap_or(0)));
        }
        let coeff = match (self.basis, other.basis) {
            (None, None) => &self.coeff + &other.coeff,
            (Some(a), Some(b)) => &self.coeff + &(&other.coeff * &rebase(b, a)?),
            _ => return Err(MomentError::MixedClasses(self.to_string(), other.to_string())),
        };
        Ok(Self { kind: self.kind, coeff, basis: self.basis, omega: self.omega }.normalized())
    }

    /// Same value expressed against another symbol of the class.
    pub fn rebase_to(&self, target: ISymbol) -> Result<Self, MomentError> {
        match self.basis {
            Some(b) => Ok(Self { coeff: &self.coeff * &rebase(b, target)?, basis: Some(target), ..self.clone() }),
            None => Ok(self.clone()),
        }
    }

    /// Coefficient relative to `target`; zero values give zero.
    pub fn coeff_in(&self, target: ISymbol) -> Result<ExactScalar, MomentError> {
        if self.is_divergent() {
            return Err(MomentError::Divergent);
        }
        match self.basis {
            Some(_) => Ok(self.rebase_to(target)?.coeff),
            None if self.coeff.is_zero() => Ok(ExactScalar::zero()),
            None => Err(MomentError::MixedClasses(self.to_string(), target.to_string())),
        }
    }

    /// `coeff * w * I` as a double; for log values this is the log coefficient.
    pub fn numeric_value(&self) -> Result<f64, MomentError> {
        if self.is_divergent() {
            return Err(MomentError::Divergent);
        }
        let mut v = self.coeff.to_f64();
        if let Some(b) = self.basis {
            v *= i_numeric(b, MAX_PRECISION_BITS)?;
        }
        if let Some(k) = self.omega {
            v *= omega_numeric(k);
        }
        Ok(v)
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_divergent() {
            return write!(f, "divergent");
        }
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.coeff)?;
        if let Some(k) = self.omega {
            write!(f, " * w{k}")?;
        }
        if let Some(b) = self.basis {
            write!(f, " * {b}")?;
        }
        if self.kind == MomentKind::LogAsymptotic {
            write!(f, " * log(1/delta)")?;
        }
        Ok(())
    }
}

/// `int_0^inf t^k (1+t)^(-m) dt = k! / ((m-1)(m-2)...(m-1-k))` when `m > k+1`.
pub fn t_integral(k: u32, m: i64) -> MomentValue {
    if m <= k as i64 + 1 {
        return MomentValue::divergent();
    }
    let mut v = BigRational::from_integer(BigInt::from(1));
    for j in 1..=k as i64 {
        v *= BigRational::from_integer(BigInt::from(j));
    }
    for j in 1..=k as i64 + 1 {
        v /= BigRational::from_integer(BigInt::from(m - j));
    }
    MomentValue::rational(ExactScalar::from_big(v))
}

/// `log(1/delta)` coefficient of `int_0^{r/delta} t^k (1+t)^(-m) dt`.
pub fn t_log_coefficient(k: u32, m: i64) -> Result<ExactScalar, MomentError> {
    match m.cmp(&(k as i64 + 1)) {
        std::cmp::Ordering::Equal => Ok(ExactScalar::one()),
        std::cmp::Ordering::Greater => Ok(ExactScalar::zero()),
        std::cmp::Ordering::Less => Err(MomentError::PolynomialDivergence { term: format!("t^{k} (1+t)^(-{m})") }),
    }
}

/// Truncation of the half space to the cylinder `[0, r/delta] x B_{r/delta}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub delta: ExactScalar,
    pub r: ExactScalar,
}

impl TruncationSpec {
    pub fn new(delta: ExactScalar, r: ExactScalar) -> Result<Self, MomentError> {
        if !delta.is_positive() || delta >= r {
            return Err(MomentError::InvalidTruncation);
        }
        Ok(Self { delta, r })
    }

    /// Cylinder half side `r / delta`.
    pub fn radius(&self) -> f64 {
        self.r.to_f64() / self.delta.to_f64()
    }
}

fn check_extra(extra_rho_deg: u32) -> Result<(), MomentError> {
    if extra_rho_deg % 2 != 0 {
        Err(MomentError::OddRhoDegree(extra_rho_deg))
    } else {
        Ok(())
    }
}

/// `int_{R^n_+} p(|ybar|, t) |ybar|^e dy`.
pub fn halfspace_moment(p: &RadialProfile, extra_rho_deg: u32, n: u32) -> Result<MomentValue, MomentError> {
    check_extra(extra_rho_deg)?;
    if !p.is_log_free() {
        return Err(MomentError::LogTerms);
    }
    let mut acc = MomentValue::zero();
    for term in p.terms() {
        let beta = n as i64 - 2 + 2 * term.rho_half_deg as i64 + extra_rho_deg as i64;
        let s = term.q_neg_twice_exp as i64;
        // rho = (1+t) u splits the term into a t integral and I_{s/2}^beta.
        if s <= 0 || beta + 1 >= s {
            return Ok(MomentValue::divergent());
        }
        let tm = t_integral(term.t_deg, s - beta - 1);
        if tm.is_divergent() {
            return Ok(MomentValue::divergent());
        }
        let sym = ISymbol::new(s as u32, beta as u32)?;
        let v = MomentValue::of_symbol(MomentKind::Finite, &term.coeff * &tm.coeff, sym, Some(n - 2))?;
        acc = acc.add(&v)?;
    }
    Ok(acc)
}

/// `int_{R^{n-1}} p(|ybar|) |ybar|^e dybar` for a profile already restricted to `t = 0`.
pub fn boundary_moment(p: &RadialProfile, extra_rho_deg: u32, n: u32) -> Result<MomentValue, MomentError> {
    check_extra(extra_rho_deg)?;
    if !p.is_t_free() {
        return Err(MomentError::Unrestricted);
    }
    if !p.is_log_free() {
        return Err(MomentError::LogTerms);
    }
    let mut acc = MomentValue::zero();
    for term in p.terms() {
        let beta = n as i64 - 2 + 2 * term.rho_half_deg as i64 + extra_rho_deg as i64;
        let s = term.q_neg_twice_exp as i64;
        if s <= 0 || beta + 1 >= s {
            return Ok(MomentValue::divergent());
        }
        let sym = ISymbol::new(s as u32, beta as u32)?;
        let v = MomentValue::of_symbol(MomentKind::Finite, term.coeff.clone(), sym, Some(n - 2))?;
        acc = acc.add(&v)?;
    }
    Ok(acc)
}

/// `log(1/delta)` coefficient of the moment over the truncated cylinder.
pub fn truncated_log_moment(
    p: &RadialProfile,
    extra_rho_deg: u32,
    n: u32,
    trunc: &TruncationSpec,
) -> Result<MomentValue, MomentError> {
    check_extra(extra_rho_deg)?;
    if !p.is_log_free() {
        return Err(MomentError::LogTerms);
    }
    if !trunc.delta.is_positive() || trunc.delta >= trunc.r {
        return Err(MomentError::InvalidTruncation);
    }
    let mut acc = MomentValue::zero();
    let mut any = false;
    for term in p.terms() {
        let beta = n as i64 - 2 + 2 * term.rho_half_deg as i64 + extra_rho_deg as i64;
        let s = term.q_neg_twice_exp as i64;
        let desc = format!("rho^{} t^{} Q^(-{}/2)", beta, term.t_deg, s);
        if s <= 0 || beta + 1 >= s {
            return Err(MomentError::PolynomialDivergence { term: desc });
        }
        let c = t_log_coefficient(term.t_deg, s - beta - 1)
            .map_err(|_| MomentError::PolynomialDivergence { term: desc })?;
        if c.is_zero() {
            continue;
        }
        any = true;
        let sym = ISymbol::new(s as u32, beta as u32)?;
        let v = MomentValue::of_symbol(MomentKind::LogAsymptotic, &term.coeff * &c, sym, Some(n - 2))?;
        acc = acc.add(&v)?;
    }
    if !any || acc.is_zero() {
        acc = MomentValue { kind: MomentKind::LogAsymptotic, ..MomentValue::zero() };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn sym(m2: u32, a: u32) -> ISymbol {
        ISymbol::new(m2, a).unwrap()
    }

    #[test]
    fn t_integral_examples() {
        assert_eq!(t_integral(0, 2), MomentValue::rational(q(1, 1)));
        assert_eq!(t_integral(2, 5), MomentValue::rational(q(1, 12)));
        assert!(t_integral(3, 3).is_divergent());
        assert!(t_integral(0, 1).is_divergent());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_i(sym(14, 7)).unwrap(), (q(1, 2), sym(14, 9)));
        assert_eq!(canonical_i(sym(16, 8)).unwrap(), (q(5, 9), sym(16, 10)));
        assert_eq!(canonical_i(sym(14, 9)).unwrap(), (q(1, 1), sym(14, 9)));
        assert!(canonical_i(ISymbol { twice_m: 4, alpha: 3 }).is_err());
    }

    #[test]
    fn closed_form_values() {
        let v = i_numeric(sym(4, 0), 53).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-16);
        let r = i_numeric(sym(14, 9), 53).unwrap() / i_numeric(sym(14, 7), 53).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let r = i_numeric(sym(16, 10), 53).unwrap() / i_numeric(sym(16, 8), 53).unwrap();
        assert!((r - 1.8).abs() < 1e-12);
        assert!(i_numeric(sym(4, 0), 64).is_err());
    }

    #[test]
    fn rebase_matches_closed_form() {
        // I(6,6) and I(7,9) live in different classes; I(6,6) and I(8,10) share one.
        let c = rebase(sym(12, 6), sym(16, 10)).unwrap();
        let (a, pa) = i_closed_form(sym(12, 6)).unwrap();
        let (b, pb) = i_closed_form(sym(16, 10)).unwrap();
        assert_eq!(pa, pb);
        assert_eq!(c, a.checked_div(&b).unwrap());
        assert!(rebase(sym(12, 6), sym(14, 9)).is_err());
    }

    #[test]
    fn symbol_text() {
        assert_eq!(sym(14, 9).to_string(), "I(7,9)");
        assert_eq!(sym(15, 9).to_string(), "I(15/2,9)");
        assert_eq!("I(15/2,9)".parse::<ISymbol>().unwrap(), sym(15, 9));
        assert_eq!("I(8,10)".parse::<ISymbol>().unwrap(), sym(16, 10));
    }

    #[test]
    fn halfspace_rho4_q7() {
        let p = RadialProfile::term(q(1, 1), 2, 0, 14, 0);
        let v = halfspace_moment(&p, 0, 7).unwrap();
        assert_eq!(v.to_string(), "1/3 * w5 * I(7,9)");
    }

    #[test]
    fn boundary_rho4_q7() {
        let p = RadialProfile::q_pow(14);
        let v = boundary_moment(&p, 4, 7).unwrap();
        assert_eq!(v.to_string(), "1 * w5 * I(7,9)");
        assert!(boundary_moment(&RadialProfile::term(q(1, 1), 0, 1, 14, 0), 4, 7).is_err());
    }

    #[test]
    fn halfspace_divergence_is_value() {
        let p = RadialProfile::term(q(1, 1), 0, 2, 12, 0);
        assert!(halfspace_moment(&p, 4, 6).unwrap().is_divergent());
        assert!(halfspace_moment(&RadialProfile::log_q(), 0, 7).is_err());
        assert!(halfspace_moment(&RadialProfile::q_pow(14), 3, 7).is_err());
    }

    #[test]
    fn truncated_examples() {
        assert_eq!(t_log_coefficient(4, 5).unwrap(), q(1, 1));
        let c = t_log_coefficient(6, 7).unwrap() - t_log_coefficient(4, 7).unwrap();
        assert_eq!(c, q(1, 1));
        assert!(t_log_coefficient(4, 4).is_err());
        let tr = TruncationSpec::new(q(1, 100), q(1, 1)).unwrap();
        let p = RadialProfile::term(q(1, 1), 2, 2, 12, 0);
        let v = truncated_log_moment(&p, 0, 6, &tr).unwrap();
        assert_eq!(v.rebase_to(sym(12, 8)).unwrap().coeff, q(1, 1));
        assert_eq!(v.kind, MomentKind::LogAsymptotic);
        assert!(TruncationSpec::new(q(2, 1), q(1, 1)).is_err());
        let bad = RadialProfile::term(q(1, 1), 2, 5, 12, 0);
        assert!(truncated_log_moment(&bad, 0, 6, &tr).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(MomentValue::zero().to_string(), "0");
        assert_eq!(MomentValue::divergent().to_string(), "divergent");
        let v = MomentValue::of_symbol(MomentKind::Finite, q(29, 432), sym(14, 9), Some(5)).unwrap();
        assert_eq!(v.to_string(), "29/432 * w5 * I(7,9)");
    }
}
