//! Parabolic-cylinder L² bound for the two-phase kernel:
//! ∫_{Q_ρ(x₀,t₀)} |Γ(x,t;ξ,τ)|² dx dt ≤ C·ρⁿ·(t₀−τ)^{1−n}·e^{−|x₀−ξ|²/(C(t₀−τ))}
//! with ρ = δ₁·[|x₀−ξ|² + (t₀−τ)]^{1/2}, covering poles inside and before
//! the cylinder.

use super::InequalityReport;
use crate::geometry::{Domain, InclusionFamily};
use crate::kernels::Material;
use crate::solver::fundamental::collar_grid;
use crate::solver::{discrete_fundamental, Grid, KernelDirection};
use crate::{Error, Result};

/// Numerically integrate |Γ|² over the parabolic cylinder and fit the
/// smallest admissible C (the right side is increasing in C).
#[allow(clippy::too_many_arguments)]
pub fn check_prop_fax(
    inclusion: &InclusionFamily,
    mat: &Material,
    pole: ([f64; 2], f64),
    cyl: ([f64; 2], f64),
    delta1: f64,
    dom: &Domain,
    spacing: f64,
    suite_c: Option<f64>,
) -> Result<InequalityReport> {
    let (xi, tau) = pole;
    let (x0, t0) = cyl;
    if !(t0 > tau) {
        return Err(Error::Precondition("cylinder top must be later than the pole".into()));
    }
    if !(delta1 > 0.0 && delta1 < 1.0) {
        return Err(Error::Precondition("delta1 must lie in (0,1)".into()));
    }
    let dist2 = (x0[0] - xi[0]).powi(2) + (x0[1] - xi[1]).powi(2);
    let rho = delta1 * (dist2 + (t0 - tau)).sqrt();
    let case = if tau > t0 - rho * rho { "pole inside cylinder" } else { "pole before cylinder" };

    // kernel on a window covering (tau, t0), refined near the pole time
    let window = t0 - tau;
    let times = Grid::graded_times(tau, t0, window / 160.0, window / 24.0, 1.3);
    let grid = collar_grid(dom, 0.0, 0.15 * dom.diameter(), spacing, times)?;
    let field = discrete_fundamental(xi, tau, Some(inclusion), mat, &grid, KernelDirection::Forward)?;

    // lattice quadrature of |Γ|² over B_ρ(x₀) × (t₀−ρ², t₀)
    let t_lo = t0 - rho * rho;
    let mut lhs = 0.0;
    let h = grid.spacing;
    for (m, &t) in grid.times.iter().enumerate() {
        if t < t_lo {
            continue;
        }
        let w = crate::solver::boundary::time_weight(&grid.times, m).min(t - t_lo).max(0.0);
        let mut slice = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let c = grid.cell_center(ix, iy);
                if (c[0] - x0[0]).powi(2) + (c[1] - x0[1]).powi(2) <= rho * rho {
                    let v = field.field[m][ix + grid.nx * iy];
                    slice += v * v;
                }
            }
        }
        lhs += w * slice * h * h;
    }

    let n = dom.n as f64;
    let shape = |c: f64| rho.powf(n) * (t0 - tau).powf(1.0 - n) * (-dist2 / (c * (t0 - tau))).exp();
    let fitted = match suite_c {
        Some(c) => c,
        None => {
            // bisect the smallest C ≥ 1 with C·shape(C) ≥ lhs
            let mut lo = 1.0f64;
            let mut hi = 1.0f64;
            while hi * shape(hi) < lhs && hi < 1e9 {
                hi *= 2.0;
            }
            if hi * shape(hi) < lhs {
                return Err(Error::Precondition("no admissible constant below 1e9".into()));
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid * shape(mid) >= lhs {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
    };
    let rhs = fitted * shape(fitted);
    Ok(InequalityReport {
        lhs,
        rhs,
        slack: rhs - lhs,
        fitted_constant: fitted,
        descriptor: format!(
            "{case}: rho {rho:.4}, |x0-xi| {:.4}, t0-tau {:.4}",
            dist2.sqrt(),
            t0 - tau
        ),
    })
}
