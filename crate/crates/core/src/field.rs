//! Concrete functions on `R^n` built from a harmonic factor and a radial profile,
//! with forward mode derivatives.

use num_dual::{Dual2_64, Dual64, DualNum, HyperDual64};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::profile::{HarmonicFactor, RadialProfile};

/// A function of `y = (ybar, t)` that can be evaluated on dual numbers.
pub trait Field: Sync {
    fn dim(&self) -> usize;
    fn eval<D: DualNum<Primitive = f64> + Copy>(&self, y: &[D]) -> D;

    fn value(&self, y: &[f64]) -> f64 {
        self.eval(y)
    }
}

/// `sum_i d^2 f / dy_i^2`.
pub fn laplacian<F: Field>(f: &F, y: &[f64]) -> f64 {
    (0..y.len()).map(|i| second_partial(f, y, i)).sum()
}

/// Diagonal second derivatives `d^2 f / dy_i^2`.
pub fn second_partials<F: Field>(f: &F, y: &[f64]) -> Vec<f64> {
    (0..y.len()).map(|i| second_partial(f, y, i)).collect()
}

fn second_partial<F: Field>(f: &F, y: &[f64], i: usize) -> f64 {
    let yd: Vec<Dual2_64> =
        y.iter().enumerate().map(|(j, &v)| Dual2_64::new(v, if i == j { 1.0 } else { 0.0 }, 0.0)).collect();
    f.eval(&yd).v2
}

pub fn gradient<F: Field>(f: &F, y: &[f64]) -> Vec<f64> {
    (0..y.len())
        .map(|i| {
            let yd: Vec<Dual64> =
                y.iter().enumerate().map(|(j, &v)| Dual64::new(v, if i == j { 1.0 } else { 0.0 })).collect();
            f.eval(&yd).eps
        })
        .collect()
}

pub fn hessian<F: Field>(f: &F, y: &[f64]) -> Vec<Vec<f64>> {
    let n = y.len();
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let yd: Vec<HyperDual64> = y
                .iter()
                .enumerate()
                .map(|(k, &v)| HyperDual64::new(v, (k == i) as u8 as f64, (k == j) as u8 as f64, 0.0))
                .collect();
            let v = f.eval(&yd).eps1eps2;
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    h
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `Re(c ((a + i b) . ybar)^4)` with `a . b = 0` and `|a| = |b|`, hence harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticMode {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: f64,
}

/// Harmonic homogeneous polynomial in the boundary variables.
#[derive(Debug, Clone, PartialEq)]
pub enum ConcreteFactor {
    Scalar,
    /// `S_ij y_i y_j` with `S` symmetric and traceless.
    Quadratic(Vec<Vec<f64>>),
    Quartic(Vec<QuarticMode>),
}

impl ConcreteFactor {
    pub fn degree(&self) -> u32 {
        match self {
            ConcreteFactor::Scalar => 0,
            ConcreteFactor::Quadratic(_) => 2,
            ConcreteFactor::Quartic(_) => 4,
        }
    }

    pub fn kind(&self) -> HarmonicFactor {
        match self {
            ConcreteFactor::Scalar => HarmonicFactor::Scalar,
            ConcreteFactor::Quadratic(_) => HarmonicFactor::RnPair,
            ConcreteFactor::Quartic(_) => HarmonicFactor::RiemQuad,
        }
    }

    pub fn eval<D: DualNum<Primitive = f64> + Copy>(&self, ybar: &[D]) -> D {
        match self {
            ConcreteFactor::Scalar => D::one(),
            ConcreteFactor::Quadratic(s) => {
                let mut acc = D::zero();
                for (i, row) in s.iter().enumerate() {
                    for (j, &sij) in row.iter().enumerate() {
                        if sij != 0.0 {
                            acc += ybar[i] * ybar[j] * sij;
                        }
                    }
                }
                acc
            }
            ConcreteFactor::Quartic(modes) => {
                let mut acc = D::zero();
                for m in modes {
                    let x = dot(&m.a, ybar);
                    let w = dot(&m.b, ybar);
                    let x2 = x * x;
                    let w2 = w * w;
                    acc += (x2 * x2 - x2 * w2 * 6.0 + w2 * w2) * m.c;
                }
                acc
            }
        }
    }

    /// A random harmonic factor of the requested kind in `dim` boundary variables.
    pub fn random(kind: HarmonicFactor, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match kind {
            HarmonicFactor::Scalar => ConcreteFactor::Scalar,
            HarmonicFactor::RnPair => {
                let mut s = vec![vec![0.0; dim]; dim];
                for i in 0..dim {
                    for j in i..dim {
                        let v = rng.random_range(-9..=9) as f64;
                        s[i][j] = v;
                        s[j][i] = v;
                    }
                }
                let tr = (0..dim).map(|i| s[i][i]).sum::<f64>() / dim as f64;
                for (i, row) in s.iter_mut().enumerate() {
                    row[i] -= tr;
                }
                ConcreteFactor::Quadratic(s)
            }
            HarmonicFactor::RiemQuad => {
                let modes = (0..3)
                    .map(|_| {
                        let a: Vec<f64> = (0..dim).map(|_| rng.random_range(-9..=9) as f64).collect();
                        let a = if norm(&a) == 0.0 { unit(dim, 0) } else { a };
                        let mut b: Vec<f64> = (0..dim).map(|_| rng.random_range(-9..=9) as f64).collect();
                        let proj = dot_f(&a, &b) / dot_f(&a, &a);
                        b.iter_mut().zip(&a).for_each(|(bi, ai)| *bi -= proj * ai);
                        if norm(&b) < 1e-9 {
                            b = orthogonal_to(&a);
                        }
                        let scale = norm(&a) / norm(&b);
                        b.iter_mut().for_each(|x| *x *= scale);
                        let c = rng.random_range(1..=9) as f64 / 81.0;
                        QuarticMode { a, b, c }
                    })
                    .collect();
                ConcreteFactor::Quartic(modes)
            }
        }
    }
}

fn unit(dim: usize, k: usize) -> Vec<f64> {
    (0..dim).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}

fn orthogonal_to(a: &[f64]) -> Vec<f64> {
    let k = (0..a.len()).max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs())).unwrap_or(0);
    let other = if k == 0 { 1 } else { 0 };
    let mut b = vec![0.0; a.len()];
    b[k] = -a[other];
    b[other] = a[k];
    b
}

fn dot<D: DualNum<Primitive = f64> + Copy>(a: &[f64], y: &[D]) -> D {
    let mut acc = D::zero();
    for (ai, yi) in a.iter().zip(y) {
        acc += *yi * *ai;
    }
    acc
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_k H_k(ybar) B_k(|ybar|, t)` on `R^n`, with `t` the last coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileField {
    pub n: usize,
    pub parts: Vec<(ConcreteFactor, RadialProfile)>,
}

impl ProfileField {
    pub fn new(n: usize, parts: Vec<(ConcreteFactor, RadialProfile)>) -> Self {
        Self { n, parts }
    }

    pub fn single(n: usize, factor: ConcreteFactor, profile: RadialProfile) -> Self {
        Self { n, parts: vec![(factor, profile)] }
    }
}

impl Field for ProfileField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval<D: DualNum<Primitive = f64> + Copy>(&self, y: &[D]) -> D {
        let (ybar, t) = y.split_at(y.len() - 1);
        let mut rho_sq = D::zero();
        for v in ybar {
            rho_sq += *v * *v;
        }
        let mut acc = D::zero();
        for (h, p) in &self.parts {
            acc += h.eval(ybar) * p.eval_dual(rho_sq, t[0]);
        }
        acc
    }
}

/// The bubble written directly in coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bubble {
    pub n: usize,
}

impl Field for Bubble {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval<D: DualNum<Primitive = f64> + Copy>(&self, y: &[D]) -> D {
        let (ybar, t) = y.split_at(y.len() - 1);
        let mut q = (t[0] + 1.0) * (t[0] + 1.0);
        for v in ybar {
            q += *v * *v;
        }
        q.powf(-(self.n as f64 - 2.0) / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn bubble_is_harmonic_numerically() {
        let b = Bubble { n: 6 };
        let y = [0.3, -0.2, 0.5, 0.1, 0.7, 0.4];
        assert!(laplacian(&b, &y).abs() < 1e-12);
    }

    #[test]
    fn derivatives_of_quadratic() {
        let s = vec![vec![1.0, 2.0], vec![2.0, -1.0]];
        let f = ProfileField::single(3, ConcreteFactor::Quadratic(s), RadialProfile::one());
        let y = [0.5, -1.5, 2.0];
        assert!((laplacian(&f, &y)).abs() < 1e-14);
        let g = gradient(&f, &y);
        assert!((g[0] - (2.0 * 0.5 + 4.0 * -1.5)).abs() < 1e-14);
        let h = hessian(&f, &y);
        assert_eq!(h[0][1], 4.0);
        assert_eq!(h[2][2], 0.0);
    }

    #[test]
    fn random_factors_are_harmonic() {
        for kind in [HarmonicFactor::RnPair, HarmonicFactor::RiemQuad] {
            let h = ConcreteFactor::random(kind, 6, 11);
            let f = ProfileField::single(7, h, RadialProfile::one());
            let y = [0.3, -1.2, 0.5, 2.1, -0.7, 0.4, 0.9];
            let scale: f64 = second_partials(&f, &y).iter().map(|v| v.abs()).sum();
            assert!(scale > 0.0);
            assert!(laplacian(&f, &y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn profile_laplacian_matches_closed_form() {
        let n = 7usize;
        let p = RadialProfile::term(q(2, 3), 1, 2, 9, 0) + RadialProfile::q_pow(5);
        for kind in [HarmonicFactor::Scalar, HarmonicFactor::RnPair, HarmonicFactor::RiemQuad] {
            let h = ConcreteFactor::random(kind, n - 1, 3);
            let lap = p.laplacian_harmonic(kind, n as u32).unwrap();
            let f = ProfileField::single(n, h.clone(), p.clone());
            let g = ProfileField::single(n, h, lap);
            let y = [0.3, -0.4, 0.5, 0.2, -0.1, 0.6, 0.8];
            let a = laplacian(&f, &y);
            let b = g.value(&y);
            assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0), "{kind:?}: {a} vs {b}");
        }
    }
}
