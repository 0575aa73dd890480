use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SuiteError;
use crate::profile::{HarmonicFactor, RadialProfile};
use crate::scalar::{q, ExactScalar};

pub type Params = BTreeMap<String, ExactScalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedId {
    U,
    Phi0,
    Phi1,
    Phi2,
    PhiTilde0,
    PhiTilde1,
    PhiTilde2,
    A7,
    A8,
    BetaKL,
}

impl NamedId {
    pub const ALL: [NamedId; 10] = [
        NamedId::U,
        NamedId::Phi0,
        NamedId::Phi1,
        NamedId::Phi2,
        NamedId::PhiTilde0,
        NamedId::PhiTilde1,
        NamedId::PhiTilde2,
        NamedId::A7,
        NamedId::A8,
        NamedId::BetaKL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedId::U => "U",
            NamedId::Phi0 => "Phi0",
            NamedId::Phi1 => "Phi1",
            NamedId::Phi2 => "Phi2",
            NamedId::PhiTilde0 => "PhiTilde0",
            NamedId::PhiTilde1 => "PhiTilde1",
            NamedId::PhiTilde2 => "PhiTilde2",
            NamedId::A7 => "A7",
            NamedId::A8 => "A8",
            NamedId::BetaKL => "BetaKL",
        }
    }

    pub fn params(self) -> &'static [&'static str] {
        match self {
            NamedId::U | NamedId::A7 => &[],
            NamedId::Phi0 | NamedId::PhiTilde0 | NamedId::BetaKL => &["a1", "a2"],
            NamedId::Phi1 => &["a1"],
            NamedId::Phi2 => &["a2", "a2p"],
            NamedId::PhiTilde1 => &["a1", "a1p", "a2p"],
            NamedId::PhiTilde2 => &["a1"],
            NamedId::A8 => &["b"],
        }
    }
}

impl fmt::Display for NamedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedId {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| SuiteError::UnknownId(s.to_string()))
    }
}

/// A closed form `sum_k H_k(ybar) B_k(|ybar|, t)` together with the equation it
/// is claimed to satisfy, `-Delta body = rhs` part by part.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFunction {
    pub id: NamedId,
    pub n: u32,
    pub params: Params,
    pub body: Vec<(HarmonicFactor, RadialProfile)>,
    pub rhs: Vec<(HarmonicFactor, RadialProfile)>,
}

impl NamedFunction {
    pub fn param(&self, name: &str) -> ExactScalar {
        self.params.get(name).cloned().unwrap_or_default()
    }

    /// Body profile attached to `factor`, zero when absent.
    pub fn part(&self, factor: HarmonicFactor) -> RadialProfile {
        pick(&self.body, factor)
    }

    pub fn rhs_part(&self, factor: HarmonicFactor) -> RadialProfile {
        pick(&self.rhs, factor)
    }

    /// Factors present in the body or the right hand side.
    pub fn factors(&self) -> Vec<HarmonicFactor> {
        let mut f: Vec<HarmonicFactor> = self.body.iter().chain(&self.rhs).map(|(h, _)| *h).collect();
        f.sort_by_key(|h| h.degree());
        f.dedup();
        f
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {}", self.id, self.n)?;
        for (k, v) in &self.params {
            write!(f, ", {k} = {v}")?;
        }
        writeln!(f, ")")?;
        for (h, p) in &self.body {
            writeln!(f, "  [{}] {}", h.name(), p)?;
        }
        for (h, p) in &self.rhs {
            writeln!(f, "  -Delta = [{}] {}", h.name(), p)?;
        }
        Ok(())
    }
}

fn pick(parts: &[(HarmonicFactor, RadialProfile)], factor: HarmonicFactor) -> RadialProfile {
    parts.iter().filter(|(h, _)| *h == factor).fold(RadialProfile::zero(), |acc, (_, p)| acc + p.clone())
}

fn qp(s: i64) -> RadialProfile {
    RadialProfile::q_pow(s as i32)
}

fn c(v: ExactScalar) -> RadialProfile {
    RadialProfile::constant(v)
}

fn div(a: ExactScalar, b: i64) -> Result<ExactScalar, SuiteError> {
    Ok(a.checked_div(&ExactScalar::int(b))?)
}

fn one_plus_t() -> RadialProfile {
    RadialProfile::t_poly(&[q(1, 1), q(1, 1)])
}

fn excluded(id: NamedId, n: u32, why: &str) -> SuiteError {
    SuiteError::Excluded(format!("{id} is not defined for n = {n}: {why}"))
}

/// Builds a named closed form for dimension `n`. Parameters not supplied are zero,
/// except `b` for [`NamedId::A8`], which is required.
pub fn build_named(id: NamedId, n: u32, params: &Params) -> Result<NamedFunction, SuiteError> {
    for k in params.keys() {
        if !id.params().contains(&k.as_str()) {
            return Err(SuiteError::UnknownParam(k.clone()));
        }
    }
    if n < 5 {
        return Err(SuiteError::InvalidDimension(n));
    }
    let get = |k: &str| params.get(k).cloned().unwrap_or_default();
    let ni = n as i64;
    let (body, rhs) = match id {
        NamedId::U => (vec![(HarmonicFactor::Scalar, qp(ni - 2))], vec![]),
        NamedId::Phi0 => {
            if n == 6 {
                return Err(excluded(id, n, "the coefficient 1/(4(n-6)) has a pole"));
            }
            (vec![(HarmonicFactor::Scalar, phi0(n, &get("a1"), &get("a2"))?)], vec![(HarmonicFactor::Scalar, qp(ni - 4))])
        }
        NamedId::Phi1 => {
            let p = one_plus_t().multiply(&(qp(ni - 4).scale(&div(q(1, 4), ni - 4)?) + qp(ni).scale(&get("a1"))));
            (vec![(HarmonicFactor::Scalar, p)], vec![(HarmonicFactor::Scalar, one_plus_t().multiply(&qp(ni - 2)))])
        }
        NamedId::Phi2 => {
            let p = qp(ni - 4).scale(&div(q(1, 2), ni - 4)?) + qp(ni - 2).scale(&get("a2")) + c(get("a2p"));
            (vec![(HarmonicFactor::Scalar, p)], vec![(HarmonicFactor::Scalar, qp(ni - 2))])
        }
        NamedId::PhiTilde0 => {
            (vec![(HarmonicFactor::Scalar, phi_tilde0(n, &get("a1"), &get("a2"))?)], vec![(HarmonicFactor::Scalar, qp(ni - 6))])
        }
        NamedId::PhiTilde1 => {
            let (a1, a1p, a2p) = (get("a1"), get("a1p"), get("a2p"));
            if n == 6 && !(a1.is_zero() && a1p.is_zero()) {
                return Err(excluded(id, n, "only a1 = a1p = 0 is allowed"));
            }
            (vec![(HarmonicFactor::RnPair, phi_tilde1(n, &a1, &a1p, &a2p)?)], vec![phidef1_rhs(n)])
        }
        NamedId::PhiTilde2 => {
            let a1 = get("a1");
            if n == 6 && !a1.is_zero() {
                return Err(excluded(id, n, "only a1 = 0 is allowed"));
            }
            (vec![(HarmonicFactor::RiemQuad, phi_tilde2(n, &a1)?)], vec![phidef2_rhs(n)])
        }
        NamedId::A7 => {
            if n != 7 {
                return Err(excluded(id, n, "defined for n = 7 only"));
            }
            (vec![(HarmonicFactor::RnPair, phi_tilde1(7, &q(0, 1), &q(0, 1), &q(0, 1))?)], vec![phidef1_rhs(7)])
        }
        NamedId::A8 => {
            if n != 8 {
                return Err(excluded(id, n, "defined for n = 8 only"));
            }
            let b = params.get("b").cloned().ok_or_else(|| SuiteError::MissingParam("b".into()))?;
            (vec![(HarmonicFactor::RnPair, a8(&b))], vec![phidef1_rhs(8)])
        }
        NamedId::BetaKL => {
            if n == 6 {
                return Err(excluded(id, n, "the factor 1/((n-6)(n-4)) has a pole"));
            }
            let (a1, a2) = (get("a1"), get("a2"));
            let pt0 = phi_tilde0(n, &a1, &a2)?;
            let d = div(q(1, 1), (ni - 6) * (ni - 4))?;
            let traceless = pt0.inv_rho_d_rho().inv_rho_d_rho().scale(&d);
            let trace = pt0.boundary_laplacian(n).scale(&d) + phi0(n, &a1, &a2)?.scale(&div(q(ni - 1, 1), ni - 4)?);
            let u = qp(ni - 2);
            (
                vec![(HarmonicFactor::RnPair, traceless), (HarmonicFactor::Scalar, trace)],
                vec![(HarmonicFactor::RnPair, u.clone()), (HarmonicFactor::Scalar, RadialProfile::rho2().multiply(&u))],
            )
        }
    };
    Ok(NamedFunction { id, n, params: params.clone(), body, rhs })
}

fn phi0(n: u32, a1: &ExactScalar, a2: &ExactScalar) -> Result<RadialProfile, SuiteError> {
    let ni = n as i64;
    Ok(qp(ni - 6).scale(&div(q(1, 4), ni - 6)?) + qp(ni - 2).scale(a1) + c(a2.clone()))
}

fn phi_tilde0(n: u32, a1: &ExactScalar, a2: &ExactScalar) -> Result<RadialProfile, SuiteError> {
    let ni = n as i64;
    let lead = if n == 8 { RadialProfile::log_q().scale(&q(-1, 12)) } else { qp(ni - 8).scale(&div(q(1, 6), ni - 8)?) };
    Ok(lead + qp(ni - 2).scale(a1) + c(a2.clone()))
}

/// Radial part of the first order correction. The `a1` term carries `(1+t)^2` and the
/// second `a1p` term a factor `1+t`; with `1+t^2` and no factor the equation fails.
fn phi_tilde1(n: u32, a1: &ExactScalar, a1p: &ExactScalar, a2p: &ExactScalar) -> Result<RadialProfile, SuiteError> {
    phi_tilde1_with(n, a1, a1p, a2p, &[q(1, 1), q(2, 1), q(1, 1)], &[q(1, 1), q(1, 1)])
}

/// [`phi_tilde1`] with the literal `1+t^2` bracket and the bare `Q^(-(n+4)/2)` term.
pub(super) fn phi_tilde1_literal(f: &NamedFunction) -> Result<RadialProfile, SuiteError> {
    let (a1, a1p, a2p) = (f.param("a1"), f.param("a1p"), f.param("a2p"));
    phi_tilde1_with(f.n, &a1, &a1p, &a2p, &[q(1, 1), q(0, 1), q(1, 1)], &[q(1, 1)])
}

fn phi_tilde1_with(
    n: u32,
    a1: &ExactScalar,
    a1p: &ExactScalar,
    a2p: &ExactScalar,
    bracket_poly: &[ExactScalar],
    second_poly: &[ExactScalar],
) -> Result<RadialProfile, SuiteError> {
    let ni = n as i64;
    let mut p = qp(ni - 2).scale(&q(1, 12))
        + RadialProfile::t_poly(&[q(1, 1), q(-1, 1), q(1, 1)]).multiply(&qp(ni)).scale(&q(ni - 2, 6))
        + qp(ni + 2).scale(&(a2p * &q(ni * (ni - 2), 1)));
    if !a1.is_zero() {
        let k = div(q(ni * (ni * ni - 4), 1), (ni - 4) * (ni - 6))? * a1.clone();
        let bracket = RadialProfile::t_poly(bracket_poly).multiply(&qp(ni + 6)).scale(&q(ni + 4, 1)) - qp(ni + 4);
        p = p + bracket.scale(&k);
    }
    if !a1p.is_zero() {
        let first = qp(ni + 2).scale(&div(q(ni * (ni - 2), 1), ni - 4)?);
        let second = RadialProfile::t_poly(second_poly).multiply(&qp(ni + 4)).scale(&q(2 * ni * (ni + 2), 1));
        p = p + (first - second).scale(a1p);
    }
    Ok(p)
}

fn phi_tilde2(n: u32, a1: &ExactScalar) -> Result<RadialProfile, SuiteError> {
    let ni = n as i64;
    let mut p = qp(ni).scale(&q(ni - 2, 6));
    if !a1.is_zero() {
        let k = div(q(ni * (ni * ni - 4) * (ni + 4), 1), (ni - 6) * (ni - 4))? * a1.clone();
        p = p + qp(ni + 6).scale(&k);
    }
    Ok(p.scale(&q(1, 3)))
}

fn a8(b: &ExactScalar) -> RadialProfile {
    qp(6).scale(&q(1, 12)) + RadialProfile::t_poly(&[q(1, 1), q(-1, 1), q(1, 1)]).multiply(&qp(8)) + qp(10).scale(b)
}

/// `R_ij t^2 d_ij U`, reduced with the trace condition.
fn phidef1_rhs(n: u32) -> (HarmonicFactor, RadialProfile) {
    let ni = n as i64;
    (HarmonicFactor::RnPair, RadialProfile::term(q(ni * (ni - 2), 1), 0, 2, (ni + 2) as i32, 0))
}

/// Quartic term of the second order equation with a harmonic quartic in place of the curvature contraction.
fn phidef2_rhs(n: u32) -> (HarmonicFactor, RadialProfile) {
    let ni = n as i64;
    (HarmonicFactor::RiemQuad, qp(ni + 2).scale(&q(ni * (ni - 2), 3)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, ExactScalar)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn a7_matches_general_formula() {
        let a7 = build_named(NamedId::A7, 7, &Params::new()).unwrap();
        let expect = qp(5).scale(&q(1, 12))
            + RadialProfile::t_poly(&[q(1, 1), q(-1, 1), q(1, 1)]).multiply(&qp(7)).scale(&q(5, 6));
        assert_eq!(a7.part(HarmonicFactor::RnPair), expect);
    }

    #[test]
    fn a8_is_phi_tilde1_family() {
        let b = q(-2, 1);
        let a8 = build_named(NamedId::A8, 8, &params(&[("b", b.clone())])).unwrap();
        let pt = build_named(NamedId::PhiTilde1, 8, &params(&[("a2p", b * q(1, 48))])).unwrap();
        assert_eq!(a8.part(HarmonicFactor::RnPair), pt.part(HarmonicFactor::RnPair));
    }

    #[test]
    fn exclusions() {
        assert!(matches!(build_named(NamedId::Phi0, 6, &Params::new()), Err(SuiteError::Excluded(_))));
        assert!(matches!(build_named(NamedId::BetaKL, 6, &Params::new()), Err(SuiteError::Excluded(_))));
        assert!(matches!(
            build_named(NamedId::PhiTilde1, 6, &params(&[("a1", q(1, 1))])),
            Err(SuiteError::Excluded(_))
        ));
        assert!(build_named(NamedId::PhiTilde1, 6, &Params::new()).is_ok());
        assert!(matches!(build_named(NamedId::A8, 8, &Params::new()), Err(SuiteError::MissingParam(_))));
        assert!(matches!(build_named(NamedId::U, 7, &params(&[("a1", q(1, 1))])), Err(SuiteError::UnknownParam(_))));
        assert!(matches!(build_named(NamedId::U, 4, &Params::new()), Err(SuiteError::InvalidDimension(4))));
    }

    #[test]
    fn parse_ids() {
        assert_eq!("phitilde1".parse::<NamedId>().unwrap(), NamedId::PhiTilde1);
        assert!("Psi".parse::<NamedId>().is_err());
    }

    #[test]
    fn log_branch_at_eight() {
        let f = build_named(NamedId::PhiTilde0, 8, &Params::new()).unwrap();
        assert!(!f.part(HarmonicFactor::Scalar).is_log_free());
    }
}
