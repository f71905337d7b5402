//! The interface flattening map Ψ: straightens the graph x_n = φ(x′, t) to
//! ξ_n = 0 inside a box of radius r₁ and is the identity outside 2r₁.

use std::sync::Arc;

/// Chart function φ(x′, t) with tangential gradient and time derivative.
/// Desk scale is n ≤ 2, so x′ is scalar.
#[derive(Clone)]
pub enum Chart {
    Zero,
    /// φ = amplitude·x′², the paraboloid chart used by the asymptotic ladder.
    Paraboloid { amplitude: f64 },
    Custom {
        phi: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        dphi_dxp: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        dphi_dt: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chart::Zero => write!(f, "Chart::Zero"),
            Chart::Paraboloid { amplitude } => write!(f, "Chart::Paraboloid({amplitude})"),
            Chart::Custom { .. } => write!(f, "Chart::Custom"),
        }
    }
}

impl Chart {
    pub fn phi(&self, xp: f64, t: f64) -> f64 {
        match self {
            Chart::Zero => 0.0,
            Chart::Paraboloid { amplitude } => amplitude * xp * xp,
            Chart::Custom { phi, .. } => phi(xp, t),
        }
    }

    pub fn dphi_dxp(&self, xp: f64, t: f64) -> f64 {
        match self {
            Chart::Zero => 0.0,
            Chart::Paraboloid { amplitude } => 2.0 * amplitude * xp,
            Chart::Custom { dphi_dxp, .. } => dphi_dxp(xp, t),
        }
    }

    pub fn dphi_dt(&self, xp: f64, t: f64) -> f64 {
        match self {
            Chart::Zero | Chart::Paraboloid { .. } => 0.0,
            Chart::Custom { dphi_dt, .. } => dphi_dt(xp, t),
        }
    }
}

/// Smooth cutoff: 1 on (−1,1), 0 outside (−2,2), |θ′| ≤ 15/8.
/// Quintic smootherstep on the shoulders keeps two continuous derivatives.
pub fn cutoff(s: f64) -> f64 {
    let a = s.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        0.0
    } else {
        let u = a - 1.0;
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

pub fn cutoff_deriv(s: f64) -> f64 {
    let a = s.abs();
    if !(1.0..2.0).contains(&a) {
        0.0
    } else {
        let u = a - 1.0;
        let d = -(30.0 * u * u * (1.0 - u) * (1.0 - u));
        d * s.signum()
    }
}

/// The change of variables (ξ, τ) = Ψ(x, t) with
/// ξ′ = x′, ξ_n = x_n − φ(x′,t)·θ(|x′|/r₁)·θ(x_n/r₁)·θ(t/r₁²), τ = t.
#[derive(Clone, Debug)]
pub struct FlatteningMap {
    pub chart: Chart,
    /// r₁ = ρ₀·min{1/4, 1/(32E)}.
    pub r1: f64,
}

impl FlatteningMap {
    pub fn new(chart: Chart, rho0: f64, regularity_e: f64) -> Self {
        let r1 = rho0 * (0.25_f64).min(1.0 / (32.0 * regularity_e));
        FlatteningMap { chart, r1 }
    }

    /// Forward map: (x, t) ↦ (ξ, τ).
    pub fn flatten(&self, x: [f64; 2], t: f64) -> ([f64; 2], f64) {
        let bump = cutoff(x[0] / self.r1) * cutoff(x[1] / self.r1) * cutoff(t / (self.r1 * self.r1));
        let xi_n = x[1] - self.chart.phi(x[0], t) * bump;
        ([x[0], xi_n], t)
    }

    /// Jacobian ∂ξ/∂x of the spatial map Φ^{(t)} at (x, t).
    pub fn jacobian(&self, x: [f64; 2], t: f64) -> [[f64; 2]; 2] {
        let r1 = self.r1;
        let tp = cutoff(x[0] / r1);
        let tn = cutoff(x[1] / r1);
        let tt = cutoff(t / (r1 * r1));
        let phi = self.chart.phi(x[0], t);
        let d_xp = self.chart.dphi_dxp(x[0], t) * tp * tn * tt
            + phi * cutoff_deriv(x[0] / r1) / r1 * tn * tt;
        let d_xn = phi * tp * cutoff_deriv(x[1] / r1) / r1 * tt;
        [[1.0, 0.0], [-d_xp, 1.0 - d_xn]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn cutoff_profile() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(0.99), 1.0);
        assert_eq!(cutoff(2.0), 0.0);
        assert_eq!(cutoff(-2.5), 0.0);
        let mid = cutoff(1.5);
        assert!(mid > 0.0 && mid < 1.0);
        // |θ'| ≤ 2 sampled densely
        for i in 0..=400 {
            let s = -2.5 + 5.0 * i as f64 / 400.0;
            assert!(cutoff_deriv(s).abs() <= 2.0);
            // derivative consistent with finite differences
            let h = 1e-6;
            let fd = (cutoff(s + h) - cutoff(s - h)) / (2.0 * h);
            assert!((fd - cutoff_deriv(s)).abs() < 1e-5);
        }
    }

    #[test]
    fn zero_chart_is_identity() {
        let m = FlatteningMap::new(Chart::Zero, 1.0, 1.0);
        let (xi, tau) = m.flatten([0.03, -0.07], 0.001);
        assert_eq!(xi, [0.03, -0.07]);
        assert_eq!(tau, 0.001);
    }

    #[test]
    fn identity_outside_double_box() {
        let m = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.3 }, 1.0, 1.0);
        let r1 = m.r1;
        let pts = [
            ([2.5 * r1, 0.1 * r1], 0.0),
            ([0.1 * r1, -2.2 * r1], 0.0),
            ([0.1 * r1, 0.1 * r1], 2.5 * r1 * r1),
        ];
        for (x, t) in pts {
            let (xi, _) = m.flatten(x, t);
            assert_eq!(xi, x, "expected identity at {x:?} t={t}");
        }
    }

    #[test]
    fn interface_maps_to_zero_level_inside_box() {
        let m = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.2 }, 1.0, 2.0);
        let r1 = m.r1;
        for i in 0..20 {
            let xp = -0.9 * r1 + 1.8 * r1 * i as f64 / 19.0;
            let t = 0.3 * r1 * r1;
            let xn = m.chart.phi(xp, t);
            if xn.abs() < r1 {
                let (xi, _) = m.flatten([xp, xn], t);
                assert!(xi[1].abs() < 1e-14, "xi_n = {} at xp = {xp}", xi[1]);
            }
        }
    }

    #[test]
    fn bilipschitz_on_random_pairs() {
        // property (c): a single C works for all sampled pairs
        let m = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.25 }, 1.0, 2.0);
        let mut rng = Rng::seed_from(3);
        let mut cmax: f64 = 1.0;
        for _ in 0..500 {
            let x1 = [rng.range(-0.6, 0.6), rng.range(-0.6, 0.6)];
            let x2 = [rng.range(-0.6, 0.6), rng.range(-0.6, 0.6)];
            let t = rng.range(-0.01, 0.01);
            let (a, _) = m.flatten(x1, t);
            let (b, _) = m.flatten(x2, t);
            let num = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
            let den = ((x1[0] - x2[0]).powi(2) + (x1[1] - x2[1]).powi(2)).sqrt();
            if den > 1e-9 {
                let r = num / den;
                cmax = cmax.max(r).max(1.0 / r);
            }
        }
        assert!(cmax < 3.0, "bi-Lipschitz constant blew up: {cmax}");
    }

    #[test]
    fn quadratic_displacement_bound() {
        // property (d): |Φ(x) − x| ≤ C|x|²/ρ₀ for a time-independent chart
        let rho0 = 2.0;
        let m = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.3 / rho0 }, rho0, 1.0);
        let mut rng = Rng::seed_from(5);
        for _ in 0..300 {
            let x = [rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)];
            let (xi, _) = m.flatten(x, 0.0);
            let disp = ((xi[0] - x[0]).powi(2) + (xi[1] - x[1]).powi(2)).sqrt();
            let norm2 = x[0] * x[0] + x[1] * x[1];
            assert!(disp <= 1.0 * norm2 / rho0 + 1e-12, "disp {disp} at |x|² {norm2}");
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.4 }, 1.0, 2.0);
        let x = [0.05, 0.03];
        let t = 0.001;
        let j = m.jacobian(x, t);
        let h = 1e-6;
        for col in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[col] += h;
            xm[col] -= h;
            let (fp, _) = m.flatten(xp, t);
            let (fm, _) = m.flatten(xm, t);
            for row in 0..2 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                assert!((fd - j[row][col]).abs() < 1e-6, "row {row} col {col}");
            }
        }
    }
}
