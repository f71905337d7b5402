//! Property tests for the metric, morphology, and kernel invariants.

use parprobe::geometry::set::{dilate_erode, hausdorff_distance, EpsMode, SampledSet};
use parprobe::kernels::spectral::QuadParams;
use parprobe::kernels::{gamma0, gamma_plus, gaussian_envelope, EnvelopeKind, Material};
use proptest::prelude::*;

fn cloud(seed: &[(f64, f64)], res: f64) -> SampledSet {
    let pts: Vec<[f64; 2]> = seed.iter().map(|&(x, y)| [x, y]).collect();
    SampledSet::new(pts.clone(), pts, res).unwrap()
}

fn point_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..24)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// Hausdorff distance is a metric on sampled sets: symmetry, identity,
    /// and the triangle inequality on random triples.
    #[test]
    fn hausdorff_is_a_metric(a in point_vec(), b in point_vec(), c in point_vec()) {
        let (sa, sb, sc) = (cloud(&a, 0.1), cloud(&b, 0.1), cloud(&c, 0.1));
        let dab = hausdorff_distance(&sa, &sb).unwrap();
        let dba = hausdorff_distance(&sb, &sa).unwrap();
        prop_assert!((dab - dba).abs() < 1e-12);
        prop_assert!(hausdorff_distance(&sa, &sa).unwrap() == 0.0);
        let dac = hausdorff_distance(&sa, &sc).unwrap();
        let dcb = hausdorff_distance(&sc, &sb).unwrap();
        prop_assert!(dab <= dac + dcb + 1e-12, "triangle: {dab} > {dac} + {dcb}");
    }

    /// Dilation is extensive and monotone in ε; erosion is anti-extensive.
    #[test]
    fn dilation_monotone_extensive(pts in point_vec(), e1 in 0.05..0.3f64, bump in 0.05..0.3f64) {
        let s = cloud(&pts, 0.1);
        let e2 = e1 + bump;
        let d1 = dilate_erode(&s, e1, EpsMode::Dilate).unwrap().unwrap();
        let d2 = dilate_erode(&s, e2, EpsMode::Dilate).unwrap().unwrap();
        // extensive: every original point is inside the dilation
        for p in s.points.iter().take(8) {
            prop_assert!(d1.contains(*p));
        }
        // monotone: the smaller dilation sits inside the bigger one
        for p in d1.points.iter().step_by(7) {
            prop_assert!(d2.contains(*p));
        }
        // erosion is anti-extensive
        if let Some(er) = dilate_erode(&s, e1, EpsMode::Erode).unwrap() {
            for p in er.points.iter().step_by(5) {
                prop_assert!(s.contains(*p), "eroded point {p:?} escaped the set");
            }
        }
    }

    /// Kernel causality: every evaluation with t ≤ s is exactly zero.
    #[test]
    fn kernels_are_causal(
        x0 in -1.0..1.0f64, x1 in -1.0..1.0f64,
        y0 in -1.0..1.0f64, y1 in -1.0..1.0f64,
        t in -1.0..1.0f64, dt in 0.0..1.0f64, k in 1.5..6.0f64
    ) {
        let s = t + dt; // s ≥ t
        prop_assert_eq!(gamma0([x0, x1], t, [y0, y1], s, 2).value, 0.0);
        let mat = Material::new(k).unwrap();
        let qp = QuadParams::default();
        let y1n = if y1 == 0.0 { -0.1 } else { -y1.abs() };
        let e = gamma_plus([x0, x1.abs() + 0.1], t, [y0, y1n], s, &mat, 2, qp).unwrap();
        prop_assert_eq!(e.value, 0.0);
        prop_assert_eq!(gaussian_envelope([x0, x1], t, [y0, y1], s, 2, 2.0, EnvelopeKind::Value), 0.0);
    }

    /// Γ₀ parabolic scaling at random h, offsets, and times.
    #[test]
    fn gamma0_scaling(h in 0.3..3.0f64, xi in -1.0..1.0f64, tau in 0.05..2.0f64, l3 in 0.1..1.0f64) {
        let lhs = gamma0([xi, 0.4], tau, [0.0, -l3], 0.0, 2).value;
        let rhs = h * h * gamma0([h * xi, 0.4 * h], h * h * tau, [0.0, -l3 * h], 0.0, 2).value;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300));
    }

    /// Γ₀ saturates the unit envelope and respects larger constants.
    #[test]
    fn envelope_dominates(r in 0.0..3.0f64, tau in 0.05..2.0f64, c in 1.0..5.0f64) {
        let v = gamma0([r, 0.0], tau, [0.0, 0.0], 0.0, 2).value;
        let env = gaussian_envelope([r, 0.0], tau, [0.0, 0.0], 0.0, 2, c, EnvelopeKind::Value);
        prop_assert!(v <= env * (1.0 + 1e-12), "value {v} above envelope {env} at c={c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, ..ProptestConfig::default() })]

    /// Γ₊ parabolic scaling with randomized h (quadrature-level tolerance).
    #[test]
    fn gamma_plus_scaling_randomized(h in 0.5..2.0f64, xp in -0.4..0.4f64, xn in 0.1..0.6f64, tau in 0.2..0.8f64) {
        let mat = Material::new(4.0).unwrap();
        let qp = QuadParams::default();
        let y = [0.0, -0.3];
        let a = gamma_plus([xp, xn], tau, y, 0.0, &mat, 2, qp).unwrap().value;
        let b = gamma_plus([h * xp, h * xn], h * h * tau, [0.0, h * y[1]], 0.0, &mat, 2, qp)
            .unwrap()
            .value;
        prop_assert!((a - h * h * b).abs() < 1e-5 * a.abs().max(1e-8), "{a} vs {}", h * h * b);
    }
}
