//! Gaussian envelope bounds for fundamental solutions and their gradients.
//!
//! Normalized so that the value envelope with constant 1 is exactly Γ₀:
//! C·(4π(t−s))^{−n/2}·exp(−|x−y|²/(4C(t−s))). The gradient envelope carries
//! one extra inverse length, C·(4π)^{−n/2}(t−s)^{−(n+1)/2}·exp(−·).

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeKind {
    Value,
    Gradient,
}

pub fn gaussian_envelope(
    x: [f64; 2],
    t: f64,
    y: [f64; 2],
    s: f64,
    n: usize,
    c_env: f64,
    kind: EnvelopeKind,
) -> f64 {
    debug_assert!(c_env >= 1.0 || kind == EnvelopeKind::Value);
    let tau = t - s;
    if tau <= 0.0 {
        return 0.0;
    }
    let dx = [x[0] - y[0], if n == 2 { x[1] - y[1] } else { 0.0 }];
    let r2 = dx[0] * dx[0] + dx[1] * dx[1];
    let gauss = (-r2 / (4.0 * c_env * tau)).exp();
    let fourpi = 4.0 * std::f64::consts::PI;
    match kind {
        EnvelopeKind::Value => c_env * (fourpi * tau).powf(-(n as f64) / 2.0) * gauss,
        EnvelopeKind::Gradient => {
            c_env * fourpi.powf(-(n as f64) / 2.0) * tau.powf(-(n as f64 + 1.0) / 2.0) * gauss
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::gamma0;

    #[test]
    fn gamma0_saturates_unit_envelope() {
        for n in [1usize, 2] {
            for i in 0..30 {
                let r = 0.1 * i as f64;
                let v = gamma0([r, 0.0], 0.7, [0.0, 0.0], 0.0, n).value;
                let env = gaussian_envelope([r, 0.0], 0.7, [0.0, 0.0], 0.0, n, 1.0, EnvelopeKind::Value);
                assert!(v <= env * (1.0 + 1e-14));
                assert!(v >= env * (1.0 - 1e-14), "unit envelope should be exactly Γ₀");
            }
        }
    }

    #[test]
    fn monotone_decreasing_in_distance() {
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let r = 0.05 * i as f64;
            let env = gaussian_envelope([r, 0.0], 1.0, [0.0, 0.0], 0.0, 2, 2.0, EnvelopeKind::Value);
            assert!(env <= prev);
            prev = env;
        }
    }

    #[test]
    fn causality() {
        assert_eq!(
            gaussian_envelope([1.0, 0.0], 1.0, [0.0, 0.0], 1.0, 2, 2.0, EnvelopeKind::Value),
            0.0
        );
    }

    #[test]
    fn gamma_plus_value_and_gradient_fit_envelopes() {
        // sweep the two-phase kernel over a grid and fit the smallest
        // envelope constants dominating values and gradients
        use crate::kernels::spectral::QuadParams;
        use crate::kernels::{gamma_plus, Material};
        let mat = Material::new(4.0).unwrap();
        let qp = QuadParams::default();
        let y = [0.0, -0.2];
        let mut c_value: f64 = 1.0;
        let mut c_grad: f64 = 1.0;
        let mut samples = Vec::new();
        for it in 1..=3 {
            let t = 0.1 * it as f64;
            for ix in -3..=3 {
                for iy in 0..=4 {
                    let x = [0.2 * ix as f64, -0.3 + 0.2 * iy as f64];
                    let e = gamma_plus(x, t, y, 0.0, &mat, 2, qp).unwrap();
                    samples.push((x, t, e));
                }
            }
        }
        let fits = |c: f64, kind: EnvelopeKind, v: f64, x: [f64; 2], t: f64| {
            v <= gaussian_envelope(x, t, y, 0.0, 2, c, kind) * (1.0 + 1e-12)
        };
        for &(x, t, ref e) in &samples {
            while !fits(c_value, EnvelopeKind::Value, e.value, x, t) {
                c_value *= 1.05;
            }
            let gnorm = e.gradient[0].hypot(e.gradient[1]);
            while !fits(c_grad, EnvelopeKind::Gradient, gnorm, x, t) {
                c_grad *= 1.05;
            }
        }
        // single moderate constants dominate the whole sweep
        assert!(c_value < 30.0, "fitted value envelope constant {c_value}");
        assert!(c_grad < 30.0, "fitted gradient envelope constant {c_grad}");
        for &(x, t, ref e) in &samples {
            assert!(fits(c_value, EnvelopeKind::Value, e.value, x, t));
            let gnorm = e.gradient[0].hypot(e.gradient[1]);
            assert!(fits(c_grad, EnvelopeKind::Gradient, gnorm, x, t));
        }
    }
}
