//! The half-space probe integral
//! I⁽ʰ⁾ = |∫₀^{λ₂h²} ∫_{ℝⁿ₊} ∇Γ₊*(x,t;−λ₁h eₙ, λ₂h²)·∇Γ₀(x,t;−λ₃h eₙ, 0)|
//! and the grid search that calibrates (λ₁, λ₂, λ₃).
//!
//! In 2-D the tangential integral is folded by Parseval: with K₊(ζ,x_n,t)
//! the partial Fourier transform of Γ₊ and K₀ the explicit transform of Γ₀,
//! I⁽ʰ⁾ = |(1/π)∫dt∫dx_n∫₀^∞ dζ [ζ²·K₊K₀ + ∂ₙK₊·∂ₙK₀]|. The integrand is a
//! smooth Gaussian-damped bump, so tensor Gauss–Legendre converges
//! spectrally; the reported error compares two node budgets, and the result
//! is refined once more if they disagree. The branch-cut quadratures inside
//! the kernel stay adaptive at each physical scale.

use crate::kernels::spectral::{transverse_kernel, QuadParams};
use crate::kernels::Material;
use crate::quad::gauss_legendre_on;
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
pub struct IhParams {
    /// Relative agreement target between the two node budgets.
    pub tol_rel: f64,
    /// Base node budget (t, x_n, ζ) ≈ (budget, 3/2·budget, 3/2·budget).
    pub base_nodes: usize,
}

impl Default for IhParams {
    fn default() -> Self {
        IhParams { tol_rel: 2e-4, base_nodes: 28 }
    }
}

/// Γ₀ transform factor e^{−ζ²t}·(4πt)^{−1/2}·e^{−(x_n+c)²/(4t)} and its
/// x_n-derivative.
#[inline]
fn k0_transform(zeta: f64, xn: f64, t: f64, c: f64) -> (f64, f64) {
    let v = (-zeta * zeta * t).exp() * (-(xn + c) * (xn + c) / (4.0 * t)).exp()
        / (4.0 * PI * t).sqrt();
    (v, v * (-(xn + c) / (2.0 * t)))
}

fn tensor_pass_2d(
    h: f64,
    lambda: [f64; 3],
    mat: &Material,
    nodes: usize,
    kernel_qp: QuadParams,
) -> f64 {
    let t_end = lambda[1] * h * h;
    let y1 = -lambda[0] * h;
    let y3 = -lambda[2] * h;
    let k = mat.k();
    let kmin = k.min(1.0);
    let (tns, tws) = gauss_legendre_on(nodes, 0.0, t_end);
    let mut total = 0.0;
    for (t, wt) in tns.iter().zip(&tws) {
        let tau_star = t_end - t;
        if *t <= 0.0 || tau_star <= 0.0 {
            continue;
        }
        let x_reach = 7.0 * ((k.max(1.0) * tau_star).sqrt() + t.sqrt()) + 2.0 * h;
        let zmax = (40.0 / (t + kmin * tau_star)).sqrt();
        let (xns, xws) = gauss_legendre_on(nodes * 3 / 2, 0.0, x_reach);
        let (zns, zws) = gauss_legendre_on(nodes * 3 / 2, 0.0, zmax);
        let mut slab = 0.0;
        for (xn, wx) in xns.iter().zip(&xws) {
            let mut line = 0.0;
            for (zeta, wz) in zns.iter().zip(&zws) {
                let ([kp, dkp], _) = transverse_kernel(*xn, tau_star, y1, *zeta, mat, kernel_qp);
                let (k0, dk0) = k0_transform(*zeta, *xn, *t, -y3);
                line += wz * (zeta * zeta * kp * k0 + dkp * dk0);
            }
            slab += wx * line;
        }
        total += wt * slab / PI;
    }
    total
}

fn tensor_pass_1d(h: f64, lambda: [f64; 3], mat: &Material, nodes: usize, kernel_qp: QuadParams) -> f64 {
    let t_end = lambda[1] * h * h;
    let y1 = [-lambda[0] * h, 0.0];
    let y3 = [-lambda[2] * h, 0.0];
    let k = mat.k();
    let (tns, tws) = gauss_legendre_on(nodes, 0.0, t_end);
    let mut total = 0.0;
    for (t, wt) in tns.iter().zip(&tws) {
        let tau_star = t_end - t;
        if *t <= 0.0 || tau_star <= 0.0 {
            continue;
        }
        let x_reach = 8.0 * ((k.max(1.0) * tau_star).sqrt() + t.sqrt()) + h;
        let (xns, xws) = gauss_legendre_on(nodes * 2, 0.0, x_reach);
        let mut slab = 0.0;
        for (x, wx) in xns.iter().zip(&xws) {
            let gp = crate::kernels::gamma_plus([*x, 0.0], tau_star, y1, 0.0, mat, 1, kernel_qp)
                .map(|e| e.gradient[0])
                .unwrap_or(0.0);
            let g0 = crate::kernels::gamma0([*x, 0.0], *t, y3, 0.0, 1).gradient[0];
            slab += wx * gp * g0;
        }
        total += wt * slab;
    }
    total
}

/// Compute I⁽ʰ⁾ for dimension n ∈ {1, 2}. Returns (value, error estimate).
pub fn ih_integral(
    h: f64,
    lambda: [f64; 3],
    mat: &Material,
    n: usize,
    params: IhParams,
) -> Result<(f64, f64)> {
    for l in lambda {
        if !(l > 0.0 && l <= 1.0) {
            return Err(Error::Precondition(format!("lambda components must lie in (0,1], got {l}")));
        }
    }
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("h must be positive, got {h}")));
    }
    // kernel evaluations enter ~10⁵ quadrature nodes with incoherent signs;
    // a per-evaluation tolerance two decades under the target is enough
    let kernel_qp = QuadParams { tol_rel: (params.tol_rel * 0.02).max(1e-8), max_panels: 600 };
    let pass = |nodes: usize| -> Result<f64> {
        Ok(match n {
            1 => tensor_pass_1d(h, lambda, mat, nodes, kernel_qp),
            2 => tensor_pass_2d(h, lambda, mat, nodes, kernel_qp),
            _ => return Err(Error::Precondition("desk scale covers n = 1, 2".into())),
        })
    };
    let mut nodes = params.base_nodes.max(12);
    let mut coarse = pass(nodes)?;
    for _ in 0..3 {
        let finer = nodes * 3 / 2;
        let fine = pass(finer)?;
        let err = (fine - coarse).abs();
        if err <= params.tol_rel * fine.abs().max(1e-300) {
            return Ok((fine.abs(), err));
        }
        nodes = finer;
        coarse = fine;
    }
    let fine = pass(nodes * 3 / 2)?;
    let err = (fine - coarse).abs();
    if err > 20.0 * params.tol_rel * fine.abs().max(1e-300) {
        return Err(Error::QuadratureNonConvergence {
            achieved: err / fine.abs().max(1e-300),
            requested: params.tol_rel,
        });
    }
    Ok((fine.abs(), err))
}

/// Grid-search calibration of (λ₁, λ₂, λ₃): maximize |I⁽¹⁾| times a penalty
/// discouraging vanishing components, then refine locally. The search ranks
/// candidates with a single fixed-budget quadrature pass (cheap and
/// deterministic); only the winner is re-evaluated with error control.
/// Fails if no triple reaches 10× its quadrature error.
pub fn calibrate_lambdas(mat: &Material, n: usize) -> Result<([f64; 3], f64)> {
    let cheap_qp = QuadParams { tol_rel: 1e-6, max_panels: 300 };
    let score = |lam: [f64; 3]| -> f64 {
        let v = match n {
            1 => tensor_pass_1d(1.0, lam, mat, 12, cheap_qp),
            _ => tensor_pass_2d(1.0, lam, mat, 12, cheap_qp),
        };
        let penalty = (lam[0] * lam[1] * lam[2]).powf(0.125);
        v.abs() * penalty
    };
    let levels = [0.2, 0.45, 0.7, 0.95];
    let mut best = ([0.0; 3], f64::NEG_INFINITY);
    for &l1 in &levels {
        for &l2 in &levels {
            for &l3 in &levels {
                let lam = [l1, l2, l3];
                let s = score(lam);
                if s > best.1 {
                    best = (lam, s);
                }
            }
        }
    }
    if best.1 <= 0.0 {
        return Err(Error::Calibration("no positive I(1) found on the coarse grid".into()));
    }
    // one local refinement pass
    let mut lam = best.0;
    let mut best_s = best.1;
    for step in [0.12, 0.06] {
        for dim in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut cand = lam;
                cand[dim] = (cand[dim] + dir * step).clamp(0.05, 1.0);
                let s = score(cand);
                if s > best_s {
                    best_s = s;
                    lam = cand;
                }
            }
        }
    }
    let fine = IhParams { tol_rel: 1e-3, base_nodes: 20 };
    let (value, err) = ih_integral(1.0, lam, mat, n, fine)?;
    if value < 10.0 * err.max(1e-14) {
        return Err(Error::Calibration(format!(
            "best triple {lam:?} has I(1) = {value:.3e} below 10x quadrature error {err:.3e}"
        )));
    }
    Ok((lam, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(k: f64) -> Material {
        Material::new(k).unwrap()
    }

    #[test]
    fn scaling_law_1d() {
        // I(h) = h^{-1}·I(1) in n = 1
        let lam = [0.5, 0.25, 0.4];
        let p = IhParams { tol_rel: 1e-5, base_nodes: 24 };
        let (i1, _) = ih_integral(1.0, lam, &mat(4.0), 1, p).unwrap();
        assert!(i1 > 0.0);
        for &h in &[0.5, 2.0] {
            let (ih, _) = ih_integral(h, lam, &mat(4.0), 1, p).unwrap();
            let ratio = ih * h / i1;
            assert!((ratio - 1.0).abs() < 1e-3, "h={h}: ratio {ratio}");
        }
    }

    #[test]
    fn doubling_h_quarters_the_2d_integral() {
        let lam = [0.5, 0.25, 0.4];
        let p = IhParams { tol_rel: 5e-4, base_nodes: 20 };
        let (i1, e1) = ih_integral(1.0, lam, &mat(4.0), 2, p).unwrap();
        let (i2, e2) = ih_integral(2.0, lam, &mat(4.0), 2, p).unwrap();
        assert!(i1 > 0.0 && i2 > 0.0);
        let ratio = i1 / i2;
        assert!(
            (ratio - 4.0).abs() < 0.01 * 4.0,
            "I(1)/I(2) = {ratio}, errs {e1:.2e} {e2:.2e}"
        );
    }

    #[test]
    fn positive_for_small_lambda1() {
        // the transmitted lower bound survives λ₁ → 0⁺
        let p = IhParams { tol_rel: 1e-3, base_nodes: 16 };
        for &k in &[4.0, 0.25] {
            let (v, e) = ih_integral(1.0, [0.1, 0.3, 0.4], &mat(k), 2, p).unwrap();
            assert!(v > 10.0 * e.max(1e-12), "k={k}: I = {v:.3e}, err {e:.3e}");
        }
    }

    #[test]
    fn calibration_returns_significant_triple_both_branches() {
        for &k in &[4.0, 0.25] {
            let (lam, i1) = calibrate_lambdas(&mat(k), 2).unwrap();
            assert!(lam.iter().all(|&l| l > 0.0 && l <= 1.0));
            assert!(i1 > 0.0, "k={k}");
        }
    }

    #[test]
    fn refinement_stability() {
        // halving the agreement target moves I(1) by well under 1%
        let lam = [0.45, 0.3, 0.45];
        let coarse = IhParams { tol_rel: 2e-3, base_nodes: 14 };
        let fine = IhParams { tol_rel: 2e-4, base_nodes: 24 };
        let (a, _) = ih_integral(1.0, lam, &mat(4.0), 2, coarse).unwrap();
        let (b, _) = ih_integral(1.0, lam, &mat(4.0), 2, fine).unwrap();
        assert!((a - b).abs() < 0.01 * b.abs(), "{a} vs {b}");
    }
}
