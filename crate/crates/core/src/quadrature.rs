//! Double exponential quadrature over half lines, intervals and the quadrant
//! `(rho, t) in (0, inf)^2`, plus residual grids and exact/numeric cross checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moments::{MomentError, MomentKind, MomentValue};
use crate::par::{map_ordered, CompensatedSum, ExecMode};
use crate::profile::{RadialProfile, MAX_PRECISION_BITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("refinement limit {level} reached with error estimate {error:e} above target {target:e}")]
    RefinementLimit { level: u32, error: f64, target: f64 },
    #[error("requested {requested} bits of precision, at most {max} are available")]
    PrecisionUnsupported { requested: u32, max: u32 },
    #[error("integrand is not finite at {0:?}")]
    NonFinite((f64, f64)),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// `x = exp(pi sinh tau)` on `(0, inf)`, tanh-sinh on finite pieces.
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub transform: Transform,
    pub rel_tol: f64,
    pub max_level: u32,
    pub precision_bits: u32,
    pub exec: ExecMode,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            transform: Transform::DoubleExponential,
            rel_tol: 1e-12,
            max_level: 8,
            precision_bits: MAX_PRECISION_BITS,
            exec: ExecMode::Parallel,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    pub fn with_exec(self, exec: ExecMode) -> Self {
        Self { exec, ..self }
    }

    fn validate(&self) -> Result<(), QuadError> {
        if self.precision_bits > MAX_PRECISION_BITS {
            return Err(QuadError::PrecisionUnsupported { requested: self.precision_bits, max: MAX_PRECISION_BITS });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
    pub level: u32,
}

/// One dimensional integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain1 {
    HalfLine,
    Interval(f64, f64),
    /// `[0, R]`, split at 1 with `x = e^v` on the outer piece.
    Truncated(f64),
}

const TAU_MAX: f64 = 3.2;
const FIRST_LEVEL: u32 = 2;
const ROUNDOFF_FACTOR: f64 = 64.0 * f64::EPSILON;

fn tau_nodes(level: u32) -> impl Iterator<Item = (f64, f64)> {
    let h = (0.5f64).powi(level as i32);
    let j = (TAU_MAX / h).round() as i64;
    (-j..=j).map(move |i| (i as f64 * h, h))
}

fn half_line_nodes(level: u32) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    tau_nodes(level)
        .map(|(tau, h)| {
            let x = (PI * tau.sinh()).exp();
            (x, h * PI * tau.cosh() * x)
        })
        .filter(|(x, w)| *x > 0.0 && x.is_finite() && w.is_finite())
        .collect()
}

fn interval_nodes(a: f64, b: f64, level: u32) -> Vec<(f64, f64)> {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    tau_nodes(level)
        .filter_map(|(tau, h)| {
            let z = FRAC_PI_2 * tau.sinh();
            let e = (-2.0 * z.abs()).exp();
            // distance from the nearer endpoint in units of (b - a)/2
            let gap = 2.0 * e / (1.0 + e);
            let x = if z >= 0.0 { b - half * gap } else { a + half * gap };
            let ch = z.cosh();
            let w = h * half * FRAC_PI_2 * tau.cosh() / (ch * ch);
            (x > a && x < b && w > 0.0 && w.is_finite()).then_some((x, w))
        })
        .collect()
}

fn truncated_nodes(r: f64, level: u32) -> Vec<(f64, f64)> {
    if r <= 1.0 {
        return interval_nodes(0.0, r, level);
    }
    let mut nodes = interval_nodes(0.0, 1.0, level);
    nodes.extend(interval_nodes(0.0, r.ln(), level).into_iter().map(|(v, w)| {
        let x = v.exp();
        (x, w * x)
    }));
    nodes
}

fn nodes(domain: Domain1, level: u32) -> Vec<(f64, f64)> {
    match domain {
        Domain1::HalfLine => half_line_nodes(level),
        Domain1::Interval(a, b) => interval_nodes(a, b, level),
        Domain1::Truncated(r) => truncated_nodes(r, level),
    }
}

/// Refines levels until two successive estimates agree to the target.
fn refine<E>(spec: &QuadratureSpec, mut estimate: E) -> Result<QuadResult, QuadError>
where
    E: FnMut(u32) -> Result<(f64, f64, usize), QuadError>,
{
    spec.validate()?;
    let (mut prev, _, mut evals) = estimate(FIRST_LEVEL)?;
    let mut target = 0.0;
    let mut floor = 0.0;
    let mut last_err = f64::INFINITY;
    for level in FIRST_LEVEL + 1..=spec.max_level.max(FIRST_LEVEL + 1) {
        let (cur, l1, n) = estimate(level)?;
        evals += n;
        if level == FIRST_LEVEL + 1 {
            // Tolerance target and roundoff floor come from a fixed level so
            // that a tighter tolerance can only stop later with a smaller bound.
            floor = ROUNDOFF_FACTOR * l1;
            target = (spec.rel_tol * cur.abs()).max(floor);
        }
        let err = (cur - prev).abs();
        last_err = err;
        if err <= target {
            return Ok(QuadResult { value: cur, error_bound: err.max(floor), evaluations: evals, level });
        }
        prev = cur;
    }
    Err(QuadError::RefinementLimit { level: spec.max_level, error: last_err, target })
}

/// `int f(x) dx` over a one dimensional domain.
pub fn integrate_1d<F>(f: F, domain: Domain1, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    refine(spec, |level| {
        let pts = nodes(domain, level);
        let mut s = CompensatedSum::default();
        let mut a = CompensatedSum::default();
        for &(x, w) in &pts {
            let v = f(x);
            if !v.is_finite() {
                return Err(QuadError::NonFinite((x, 0.0)));
            }
            s.add(w * v);
            a.add((w * v).abs());
        }
        Ok((s.value(), a.value(), pts.len()))
    })
}

/// `int int f(rho, t) drho dt` over a product domain. Rows in `t` are
/// evaluated through [`map_ordered`] and reduced in index order.
pub fn integrate_2d<F>(f: F, rho: Domain1, t: Domain1, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    refine(spec, |level| {
        let rn = nodes(rho, level);
        let tn = nodes(t, level);
        let rows = map_ordered(spec.exec, &tn, |&(tv, tw)| {
            let mut s = CompensatedSum::default();
            let mut a = CompensatedSum::default();
            for &(rv, rw) in &rn {
                let v = f(rv, tv);
                if !v.is_finite() {
                    return Err(QuadError::NonFinite((rv, tv)));
                }
                s.add(rw * v);
                a.add((rw * v).abs());
            }
            Ok((tw * s.value(), tw * a.value()))
        });
        let mut s = CompensatedSum::default();
        let mut a = CompensatedSum::default();
        for row in rows {
            let (v, av) = row?;
            s.add(v);
            a.add(av);
        }
        Ok((s.value(), a.value(), rn.len() * tn.len()))
    })
}

/// `int_0^inf int_0^inf f(rho, t) rho^w drho dt`.
pub fn integrate_quadrant<F>(f: F, weight_rho_deg: i32, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    integrate_2d(|r, t| f(r, t) * r.powi(weight_rho_deg), Domain1::HalfLine, Domain1::HalfLine, spec)
}

/// `int_0^inf f(rho) rho^w drho`.
pub fn integrate_half_line<F>(f: F, weight_rho_deg: i32, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_1d(|r| f(r) * r.powi(weight_rho_deg), Domain1::HalfLine, spec)
}

/// `int_0^inf int_0^inf p(rho, t) rho^w drho dt` with overflow safe evaluation.
pub fn integrate_profile_quadrant(p: &RadialProfile, w: i32, spec: &QuadratureSpec) -> Result<QuadResult, QuadError> {
    integrate_2d(|r, t| p.eval_scaled(r, t, w), Domain1::HalfLine, Domain1::HalfLine, spec)
}

/// `int_0^inf p(rho, 0) rho^w drho`.
pub fn integrate_profile_ray(p: &RadialProfile, w: i32, spec: &QuadratureSpec) -> Result<QuadResult, QuadError> {
    integrate_1d(|r| p.eval_scaled(r, 0.0, w), Domain1::HalfLine, spec)
}

/// `int_0^R int_0^R p(rho, t) rho^w drho dt`.
pub fn integrate_profile_box(p: &RadialProfile, w: i32, r: f64, spec: &QuadratureSpec) -> Result<QuadResult, QuadError> {
    integrate_2d(|x, t| p.eval_scaled(x, t, w), Domain1::Truncated(r), Domain1::Truncated(r), spec)
}

/// `Gamma(x/2)` in double precision for a positive integer `x`.
pub fn gamma_half_f64(x: u32) -> f64 {
    let mut v = if x % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut k = if x % 2 == 0 { 2 } else { 1 };
    while k + 2 <= x {
        v *= k as f64 / 2.0;
        k += 2;
    }
    v
}

/// Surface measure of the unit sphere `S^k`, `2 pi^((k+1)/2) / Gamma((k+1)/2)`.
pub fn omega_numeric(k: u32) -> f64 {
    2.0 * std::f64::consts::PI.powf((k + 1) as f64 / 2.0) / gamma_half_f64(k + 1)
}

/// Outcome of comparing an exact moment with a quadrature value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub pass: bool,
    pub exact: f64,
    pub numeric: f64,
    pub ratio: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Absolute threshold, relative to `scale`, used when the exact value is zero.
pub const ZERO_TOL: f64 = 1e-9;

/// Compares `exact` (a finite moment) with a quadrature estimate.
pub fn crosscheck(exact: &MomentValue, numeric: &QuadResult, tol: f64, scale: f64) -> Result<CrossCheck, QuadError> {
    if exact.kind != MomentKind::Finite {
        return Err(MomentError::KindMismatch(exact.kind, MomentKind::Finite).into());
    }
    let ev = exact.numeric_value()?;
    Ok(compare(ev, numeric.value, numeric.error_bound, tol, scale))
}

/// Same comparison on plain numbers.
pub fn compare(exact: f64, numeric: f64, error_bound: f64, tol: f64, scale: f64) -> CrossCheck {
    let abs_err = (numeric - exact).abs();
    let (pass, rel_err) = if exact == 0.0 {
        (abs_err <= ZERO_TOL * scale.abs() + error_bound, if scale != 0.0 { abs_err / scale.abs() } else { abs_err })
    } else {
        (abs_err <= tol * exact.abs() + error_bound, abs_err / exact.abs())
    };
    CrossCheck { pass, exact, numeric, ratio: if exact != 0.0 { numeric / exact } else { f64::NAN }, abs_err, rel_err }
}

/// Maximum residual over a geometric `(rho, t)` ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub points: Vec<(f64, f64)>,
    pub max_abs: f64,
    pub max_rel: f64,
    pub scale: f64,
}

impl ResidualGrid {
    /// `count` points spaced geometrically over `[lo, hi]`.
    pub fn ladder(count: usize, lo: f64, hi: f64) -> Vec<f64> {
        let r = (hi / lo).ln();
        (0..count).map(|i| lo * (r * i as f64 / (count - 1) as f64).exp()).collect()
    }

    /// Default 16 x 16 ladder on `[1e-2, 1e3]`.
    pub fn default_points() -> Vec<(f64, f64)> {
        let l = Self::ladder(16, 1e-2, 1e3);
        l.iter().flat_map(|&r| l.iter().map(move |&t| (r, t))).collect()
    }
}

/// Unit boundary direction used to lift `(rho, t)` to a point of `R^n`.
pub fn grid_direction(n: u32) -> Vec<f64> {
    let v: Vec<f64> = (0..n - 1).map(|i| 1.0 + 0.618_033_988_75 * i as f64).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Lifts `(rho, t)` to `y = (rho * dir, t)`.
pub fn lift_point(dir: &[f64], rho: f64, t: f64) -> Vec<f64> {
    let mut y: Vec<f64> = dir.iter().map(|d| rho * d).collect();
    y.push(t);
    y
}

/// Evaluates `f(y) -> (residual, magnitude)` on the default grid and reports the
/// largest absolute residual and its size relative to the largest magnitude.
pub fn residual_max<F>(f: F, n: u32, exec: ExecMode) -> ResidualGrid
where
    F: Fn(&[f64]) -> (f64, f64) + Sync,
{
    let points = ResidualGrid::default_points();
    let dir = grid_direction(n);
    let vals = map_ordered(exec, &points, |&(r, t)| f(&lift_point(&dir, r, t)));
    let max_abs = vals.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
    let scale = vals.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let max_rel = if scale > 0.0 { max_abs / scale } else { max_abs };
    ResidualGrid { points, max_abs, max_rel, scale }
}
