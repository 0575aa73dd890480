use proptest::prelude::*;

use pohozaev_core::curvature::{reduce_contraction, ContractionPattern, Slot, WeightDomain};
use pohozaev_core::field::{laplacian, ConcreteFactor, Field, ProfileField};
use pohozaev_core::moments::{canonical_i, halfspace_moment, i_numeric, ISymbol};
use pohozaev_core::profile::{Direction, HarmonicFactor, RadialProfile};
use pohozaev_core::quadrature::{integrate_half_line, QuadratureSpec};
use pohozaev_core::report::{emit, exit_code, parse_json, Command, Format, ReportDocument, RunConfig};
use pohozaev_core::scalar::{q, ExactScalar};
use pohozaev_core::suite::{Provenance, Status, VerificationReport};

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (-9i64..=9, 1i64..=6).prop_map(|(p, d)| q(p, d))
}

fn term(max_log: u32) -> impl Strategy<Value = RadialProfile> {
    (scalar(), 0u32..=2, 0u32..=3, 1i32..=12, 0u32..=max_log).prop_map(|(c, a, k, s, l)| RadialProfile::term(c, a, k, s, l))
}

fn profile(max_log: u32) -> impl Strategy<Value = RadialProfile> {
    prop::collection::vec(term(max_log), 1..5).prop_map(|ts| ts.into_iter().fold(RadialProfile::zero(), |a, b| a + b))
}

/// Log free profiles with even `s` whose half space moments converge for n = 7.
fn convergent() -> impl Strategy<Value = RadialProfile> {
    prop::collection::vec((scalar(), 0u32..=1, 0u32..=2, 8i32..=10), 1..4).prop_map(|ts| {
        ts.into_iter().fold(RadialProfile::zero(), |acc, (c, a, k, s)| acc + RadialProfile::term(c, a, k, 2 * s, 0))
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn status() -> impl Strategy<Value = Status> {
    prop_oneof![Just(Status::Pass), Just(Status::Fail), Just(Status::DiscrepancyWithPaper)]
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn derivatives_commute(p in profile(1)) {
        let a = p.d_t().inv_rho_d_rho();
        let b = p.inv_rho_d_rho().d_t();
        prop_assert_eq!(a.reduced(), b.reduced());
    }

    #[test]
    fn leibniz_in_t(p in profile(1), r in profile(1)) {
        let lhs = p.multiply(&r).d_t();
        let rhs = p.d_t().multiply(&r) + p.multiply(&r.d_t());
        prop_assert_eq!(lhs.reduced(), rhs.reduced());
    }

    #[test]
    fn canonical_form_is_idempotent(p in profile(1)) {
        let c = p.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert_eq!(p.reduced().reduced(), p.reduced());
    }

    #[test]
    fn scalar_text_round_trip(x in scalar(), y in scalar()) {
        let z = &x * &y + x.clone();
        prop_assert_eq!(z.to_string().parse::<ExactScalar>().unwrap(), z);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn derivatives_match_finite_differences(p in profile(1), rho in 0.2f64..3.0, t in 0.2f64..3.0) {
        let h = 1e-5;
        let ev = |rr: f64, tt: f64| p.eval_numeric(rr, tt, 53).unwrap();
        let dt = p.differentiate(Direction::DT).eval_numeric(rho, t, 53).unwrap();
        let fd_t = (ev(rho, t + h) - ev(rho, t - h)) / (2.0 * h);
        let dr = p.differentiate(Direction::InvRhoDRho).eval_numeric(rho, t, 53).unwrap();
        let fd_r = (ev(rho + h, t) - ev(rho - h, t)) / (2.0 * h) / rho;
        let scale = |a: f64| a.abs().max(p.entries().map(|(_, c)| c.to_f64().abs()).sum::<f64>() * 1e-3);
        prop_assert!((dt - fd_t).abs() <= 1e-6 * scale(dt), "{} vs {}", dt, fd_t);
        prop_assert!((dr - fd_r).abs() <= 1e-6 * scale(dr), "{} vs {}", dr, fd_r);
    }

    #[test]
    fn harmonic_laplacian_matches_coordinates(
        p in profile(0),
        kind in prop_oneof![Just(HarmonicFactor::RnPair), Just(HarmonicFactor::RiemQuad)],
        n in 5u32..=8,
        seed in 0u64..1000,
        y in prop::collection::vec(-1.5f64..1.5, 8),
        t in 0.1f64..2.0,
    ) {
        let dim = n as usize;
        let factor = ConcreteFactor::random(kind, dim - 1, seed);
        let body = ProfileField::single(dim, factor.clone(), p.clone());
        let lap = ProfileField::single(dim, factor, p.laplacian_harmonic(kind, n).unwrap());
        let mut point: Vec<f64> = y[..dim - 1].to_vec();
        point.push(t);
        let h = 1e-3;
        let f0 = body.value(&point);
        let mut fd = 0.0;
        let mut size = 0.0;
        for i in 0..dim {
            let mut a = point.clone();
            let mut b = point.clone();
            a[i] += h;
            b[i] -= h;
            let d2 = (body.value(&a) - 2.0 * f0 + body.value(&b)) / (h * h);
            fd += d2;
            size += d2.abs();
        }
        let exact = lap.value(&point);
        prop_assert!((exact - fd).abs() <= 1e-5 * size.max(exact.abs()).max(1e-12), "{} vs {}", exact, fd);
        prop_assert!((laplacian(&body, &point) - exact).abs() <= 1e-9 * size.max(exact.abs()).max(1e-12));
    }

    #[test]
    fn canonical_ratio_matches_numerics(twice_m in 3u32..=24, alpha in 0u32..=12) {
        let Ok(s) = ISymbol::new(twice_m, alpha) else { return Ok(()) };
        let (c, base) = canonical_i(s).unwrap();
        let lhs = c.to_f64() * i_numeric(base, 53).unwrap();
        let rhs = i_numeric(s, 53).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn moments_are_linear(p in convergent(), r in convergent()) {
        let n = 7;
        let sum = halfspace_moment(&(p.clone() + r.clone()), 0, n).unwrap();
        let parts = halfspace_moment(&p, 0, n).unwrap().add(&halfspace_moment(&r, 0, n).unwrap()).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn reduction_is_linear(p in convergent(), r in convergent(), a in scalar(), b in scalar()) {
        let n = 7;
        let pat = |w: RadialProfile| ContractionPattern::new(vec![Slot::Rn, Slot::Rn], w, WeightDomain::HalfSpace);
        let lhs = reduce_contraction(&pat(p.scale(&a) + r.scale(&b)), n).unwrap();
        let rp = reduce_contraction(&pat(p), n).unwrap().scale(&a);
        let rr = reduce_contraction(&pat(r), n).unwrap().scale(&b);
        prop_assert_eq!(lhs, rp.add(&rr).unwrap());
    }

    #[test]
    fn halving_tolerance_tightens_bound(m in 3i32..=9, alpha in 0i32..=4, k in 4i32..=10) {
        let f = |x: f64| (1.0 + x * x).powi(-m);
        let loose = QuadratureSpec::with_tol(2f64.powi(-3 * k));
        let tight = QuadratureSpec::with_tol(2f64.powi(-3 * k - 1));
        let a = integrate_half_line(f, alpha, &loose).unwrap();
        let b = integrate_half_line(f, alpha, &tight).unwrap();
        prop_assert!(b.error_bound <= a.error_bound);
        prop_assert_eq!(integrate_half_line(f, alpha, &tight).unwrap(), b);
    }

    #[test]
    fn exit_code_depends_on_multiset_only(mut v in prop::collection::vec(status(), 0..12), seed in any::<u64>()) {
        let before = exit_code(v.iter().copied());
        let len = v.len();
        if len > 1 {
            v.rotate_left((seed as usize) % len);
            v.swap(0, len - 1);
        }
        prop_assert_eq!(exit_code(v.iter().copied()), before);
        let want = if v.contains(&Status::Fail) { 1 } else if v.contains(&Status::DiscrepancyWithPaper) { 3 } else { 0 };
        prop_assert_eq!(before, want);
    }

    #[test]
    fn json_round_trip(
        rows in prop::collection::vec((status(), "[A-Za-z0-9() +*/-]{0,24}", prop::option::of(-1e6f64..1e6), any::<u32>()), 0..6),
        tol in 1e-12f64..1e-2,
    ) {
        let reports = rows
            .into_iter()
            .map(|(s, text, num, n)| {
                let mut r = VerificationReport::new("AdA-1", text.clone(), Some(n % 9), "ref")
                    .expect(text.clone(), Provenance::Derived)
                    .exact(text)
                    .status(s);
                if let Some(x) = num {
                    r = r.numeric(x, 1e-12, x * (1.0 + 1e-9));
                }
                r
            })
            .collect();
        let mut cfg = RunConfig::new(Command::ScanB { grid: vec![q(-50, 21), q(3, 2)] });
        cfg.tol = tol;
        let doc = ReportDocument::new(cfg, reports, None);
        let bytes = emit(&doc, Format::Json).unwrap();
        prop_assert_eq!(parse_json(&bytes).unwrap(), doc.clone());
        prop_assert_eq!(emit(&doc, Format::Json).unwrap(), bytes);
    }
}
