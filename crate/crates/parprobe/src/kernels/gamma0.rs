//! The standard fundamental solution of `∂_t − Δ`.

use super::KernelEval;

/// Γ₀(x−y, t−s) = (4π(t−s))^{−n/2} exp(−|x−y|²/(4(t−s))) for t > s, else 0.
/// The gradient is the analytic spatial gradient, −(x−y)/(2(t−s))·Γ₀.
pub fn gamma0(x: [f64; 2], t: f64, y: [f64; 2], s: f64, n: usize) -> KernelEval {
    debug_assert!(n == 1 || n == 2);
    let tau = t - s;
    if tau <= 0.0 {
        return KernelEval::zero(x, t, y, s);
    }
    let dx = [x[0] - y[0], if n == 2 { x[1] - y[1] } else { 0.0 }];
    let r2 = dx[0] * dx[0] + dx[1] * dx[1];
    let norm = (4.0 * std::f64::consts::PI * tau).powf(-(n as f64) / 2.0);
    let value = norm * (-r2 / (4.0 * tau)).exp();
    let g = -0.5 / tau;
    KernelEval {
        value,
        gradient: [g * dx[0] * value, if n == 2 { g * dx[1] * value } else { 0.0 }],
        point_pair: (x, t, y, s),
        quad_error: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn zero_offset_value_n2() {
        // x = y, t − s = 1 → 1/(4π)
        let e = gamma0([0.3, -0.2], 1.5, [0.3, -0.2], 0.5, 2);
        assert!((e.value - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(e.gradient, [0.0, 0.0]);
    }

    #[test]
    fn characteristic_radius_value() {
        // |x−y|² = 4(t−s) → e⁻¹ (4π(t−s))^{−n/2}
        let tau: f64 = 0.7;
        let r = (4.0 * tau).sqrt();
        for n in [1usize, 2] {
            let e = gamma0([r, 0.0], tau, [0.0, 0.0], 0.0, n);
            let expect = (-1.0_f64).exp() * (4.0 * PI * tau).powf(-(n as f64) / 2.0);
            assert!((e.value - expect).abs() < 1e-15 * expect.max(1.0));
        }
    }

    #[test]
    fn causality() {
        let e = gamma0([0.0, 0.0], 1.0, [0.0, 0.0], 1.0, 2);
        assert_eq!(e.value, 0.0);
        let e = gamma0([1.0, 0.0], 0.5, [0.0, 0.0], 1.0, 2);
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn parabolic_scaling_identity() {
        // Γ₀(ξ,τ;−λ₃ eₙ,0) = hⁿ Γ₀(hξ, h²τ; −λ₃ h eₙ, 0)
        let lambda3 = 0.4;
        for n in [1usize, 2] {
            for &h in &[0.25, 0.5, 2.0, 4.0] {
                let xi = [0.3, 0.7];
                let tau = 0.9;
                let lhs = gamma0(xi, tau, [0.0, -lambda3], 0.0, n).value;
                let rhs = (h as f64).powi(n as i32)
                    * gamma0([h * xi[0], h * xi[1]], h * h * tau, [0.0, -lambda3 * h], 0.0, n).value;
                assert!((lhs - rhs).abs() < 1e-13 * lhs.abs().max(1e-30), "n={n} h={h}");
            }
        }
    }

    #[test]
    fn gradient_matches_central_difference() {
        let (x, t, y, s) = ([0.4, -0.3], 1.2, [0.1, 0.2], 0.3);
        let e = gamma0(x, t, y, s, 2);
        let h = 1e-6;
        for d in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[d] += h;
            xm[d] -= h;
            let fd = (gamma0(xp, t, y, s, 2).value - gamma0(xm, t, y, s, 2).value) / (2.0 * h);
            assert!((fd - e.gradient[d]).abs() < 1e-8, "d={d}");
        }
    }

    #[test]
    fn heat_equation_residual_small() {
        // ∂_t Γ₀ − ΔΓ₀ = 0 away from the pole, via 4th-order finite differences.
        let (y, s) = ([0.0, 0.0], 0.0);
        let f = |x0: f64, x1: f64, t: f64| gamma0([x0, x1], t, y, s, 2).value;
        let (x0, x1, t) = (0.5, -0.3, 0.8);
        let h = 1e-3;
        let d2 = |g: &dyn Fn(f64) -> f64, c: f64| {
            (-g(c + 2.0 * h) + 16.0 * g(c + h) - 30.0 * g(c) + 16.0 * g(c - h) - g(c - 2.0 * h))
                / (12.0 * h * h)
        };
        let dt = (-f(x0, x1, t + 2.0 * h) + 8.0 * f(x0, x1, t + h) - 8.0 * f(x0, x1, t - h)
            + f(x0, x1, t - 2.0 * h))
            / (12.0 * h);
        let lap = d2(&|u| f(u, x1, t), x0) + d2(&|u| f(x0, u, t), x1);
        assert!((dt - lap).abs() < 1e-6, "residual {}", dt - lap);
    }
}
