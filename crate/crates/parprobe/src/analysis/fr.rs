//! Gaussian space-time convolution identity:
//! ∫ₛᵗ∫_{ℝⁿ} (t−τ)^{−α} e^{−a|x−ξ|²/(4(t−τ))} (τ−s)^{−β} e^{−a|ξ−y|²/(4(τ−s))} dξ dτ
//!   = C(α,β,n) · a^{−n/2} · (t−s)^{n/2+1−α−β} · e^{−a|x−y|²/(4(t−s))},
//! with C = (4π)^{n/2}·B(n/2+1−α, n/2+1−β).
//!
//! The harness evaluates the left side by brute-force quadrature, divides by
//! the right-side shape, and checks that the ratio is the same constant
//! across randomized (x, y, s, t) — and that it matches the Beta-function
//! value.

use super::InequalityReport;
use crate::quad::{adaptive_gk, gauss_legendre_on};
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct FrParams {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub n: usize,
}

impl FrParams {
    pub fn new(alpha: f64, beta: f64, a: f64, n: usize) -> Result<Self> {
        let limit = n as f64 / 2.0 + 1.0;
        if alpha >= limit || beta >= limit {
            return Err(Error::Precondition(format!(
                "exponents must satisfy alpha, beta < n/2 + 1 = {limit}"
            )));
        }
        if !(a > 0.0) {
            return Err(Error::Precondition("a must be positive".into()));
        }
        if n != 1 && n != 2 {
            return Err(Error::Precondition("n must be 1 or 2".into()));
        }
        Ok(FrParams { alpha, beta, a, n })
    }

    /// The analytic constant (4π)^{n/2}·B(n/2+1−α, n/2+1−β).
    pub fn analytic_constant(&self) -> f64 {
        let n2 = self.n as f64 / 2.0;
        (4.0 * PI).powf(n2) * beta_fn(n2 + 1.0 - self.alpha, n2 + 1.0 - self.beta)
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = COEF[0];
        for (i, c) in COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

fn beta_fn(p: f64, q: f64) -> f64 {
    (ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)).exp()
}

/// Brute-force quadrature of the left side at one point set.
pub fn convolution_quadrature(p: &FrParams, x: [f64; 2], y: [f64; 2], s: f64, t: f64) -> f64 {
    assert!(t > s);
    let span = t - s;
    // τ = s + span·sin²θ absorbs both endpoint powers
    let outer = |theta: f64| {
        let sigma = theta.sin().powi(2);
        let tau = s + span * sigma;
        let u = (t - tau).max(1e-300);
        let v = (tau - s).max(1e-300);
        let jac = span * (2.0 * theta).sin();
        let spatial = gaussian_product_integral(p, x, y, u, v);
        u.powf(-p.alpha) * v.powf(-p.beta) * spatial * jac
    };
    let (val, _) = adaptive_gk(&outer, 0.0, PI / 2.0, 0.0, 1e-10, 600);
    val
}

/// ∫_{ℝⁿ} e^{−a|x−ξ|²/(4u)} e^{−a|ξ−y|²/(4v)} dξ by tensor Gauss–Legendre.
/// The integrand is the product of two Gaussians, i.e. one Gaussian of width
/// √(4uv/(a(u+v))) around the weighted midpoint; the nodes cover that bump
/// even when one factor degenerates to a near-delta at the τ endpoints.
fn gaussian_product_integral(p: &FrParams, x: [f64; 2], y: [f64; 2], u: f64, v: f64) -> f64 {
    let mu = [
        (v * x[0] + u * y[0]) / (u + v),
        (v * x[1] + u * y[1]) / (u + v),
    ];
    let w_eff = (4.0 * u * v / (p.a * (u + v))).sqrt();
    let reach = 9.0 * w_eff + 1e-12;
    let order = 40;
    let (xs, wxs) = gauss_legendre_on(order, mu[0] - reach, mu[0] + reach);
    if p.n == 1 {
        let mut total = 0.0;
        for (xi, wi) in xs.iter().zip(&wxs) {
            let g1 = (-p.a * (x[0] - xi) * (x[0] - xi) / (4.0 * u)).exp();
            let g2 = (-p.a * (xi - y[0]) * (xi - y[0]) / (4.0 * v)).exp();
            total += wi * g1 * g2;
        }
        return total;
    }
    let (ys, wys) = gauss_legendre_on(order, mu[1] - reach, mu[1] + reach);
    let mut total = 0.0;
    for (xi, wi) in xs.iter().zip(&wxs) {
        let dx1 = (x[0] - xi) * (x[0] - xi);
        let dx2 = (xi - y[0]) * (xi - y[0]);
        for (yi, wj) in ys.iter().zip(&wys) {
            let r1 = dx1 + (x[1] - yi) * (x[1] - yi);
            let r2 = dx2 + (yi - y[1]) * (yi - y[1]);
            total += wi * wj * (-p.a * r1 / (4.0 * u) - p.a * r2 / (4.0 * v)).exp();
        }
    }
    total
}

/// Ratio of the quadrature value to the right-side shape at one point set.
pub fn identity_ratio(p: &FrParams, x: [f64; 2], y: [f64; 2], s: f64, t: f64) -> f64 {
    let lhs = convolution_quadrature(p, x, y, s, t);
    let span = t - s;
    let dx = [x[0] - y[0], if p.n == 2 { x[1] - y[1] } else { 0.0 }];
    let r2 = dx[0] * dx[0] + dx[1] * dx[1];
    let shape = p.a.powf(-(p.n as f64) / 2.0)
        * span.powf(p.n as f64 / 2.0 + 1.0 - p.alpha - p.beta)
        * (-p.a * r2 / (4.0 * span)).exp();
    lhs / shape
}

/// Evaluate the identity over the supplied point sets; passes when the
/// ratios agree to std/mean < 1e−3 and match the analytic constant.
pub fn check_lemma_fr(p: &FrParams, pairs: &[([f64; 2], [f64; 2], f64, f64)]) -> Result<InequalityReport> {
    if pairs.is_empty() {
        return Err(Error::EmptySet("fr harness point sets"));
    }
    for &(_, _, s, t) in pairs {
        if !(t > s) {
            return Err(Error::Precondition("each pair needs s < t".into()));
        }
    }
    let ratios: Vec<f64> = pairs
        .iter()
        .map(|&(x, y, s, t)| identity_ratio(p, x, y, s, t))
        .collect();
    let (mean, std) = crate::fit::mean_std(&ratios);
    let analytic = p.analytic_constant();
    let spread = std / mean.abs().max(1e-300);
    let const_err = (mean - analytic).abs() / analytic;
    Ok(InequalityReport {
        lhs: spread,
        rhs: 1e-3,
        slack: 1e-3 - spread,
        fitted_constant: mean,
        descriptor: format!(
            "alpha={}, beta={}, a={}, n={}: ratio {mean:.8e} (analytic {analytic:.8e}, rel dev {const_err:.2e}), std/mean {spread:.2e} over {} pairs",
            p.alpha,
            p.beta,
            p.a,
            p.n,
            pairs.len()
        ),
    })
}
