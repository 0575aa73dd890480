use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pohozaev_core::par::ExecMode;
use pohozaev_core::profile::RadialProfile;
use pohozaev_core::quadrature::{integrate_profile_quadrant, residual_max, QuadratureSpec};
use pohozaev_core::scalar::q;

fn modes() -> [(&'static str, ExecMode); 2] {
    [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)]
}

fn quadrant(c: &mut Criterion) {
    let p = RadialProfile::term(q(-5, 4), 0, 0, 7, 0)
        + RadialProfile::term(q(-35, 6), 0, 0, 9, 0).multiply(&RadialProfile::t_poly(&[q(1, 1), q(-1, 1), q(1, 1)]));
    let w = p.multiply(&p);
    let mut g = c.benchmark_group("quadrant");
    for (name, mode) in modes() {
        let spec = QuadratureSpec::default().with_exec(mode);
        g.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| integrate_profile_quadrant(black_box(&w), 9, spec).unwrap())
        });
    }
    g.finish();
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("residual_grid");
    for (name, mode) in modes() {
        g.bench_function(name, |b| {
            b.iter(|| {
                residual_max(
                    |y| {
                        let r2: f64 = y.iter().take(y.len() - 1).map(|v| v * v).sum();
                        let t = y[y.len() - 1];
                        let u = (r2 + (1.0 + t) * (1.0 + t)).powf(-2.5);
                        (u * 1e-16, u)
                    },
                    7,
                    mode,
                )
            })
        });
    }
    g.finish();
}

criterion_group!(benches, quadrant, grid);
criterion_main!(benches);
