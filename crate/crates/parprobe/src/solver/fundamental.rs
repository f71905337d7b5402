//! Discretized fundamental solutions: a mollified point source injected on
//! the collar box, solved forward (Γ₂-type) or backward in time via time
//! reversal (Γ₁*-type), with absorbing (homogeneous Dirichlet) truncation.

use super::boundary::{BoundaryData, BoundaryLattice};
use super::forward::{solve_with_initial, Scheme};
use super::fv::Coefficient;
use super::Grid;
use crate::geometry::{Domain, InclusionFamily};
use crate::kernels::Material;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelDirection {
    /// Γ(x,t; y,s): zero for t ≤ s, pole at the window start.
    Forward,
    /// Γ*(x,t; ξ,τ): zero for t ≥ τ, pole at the window end.
    Adjoint,
}

/// A fundamental-solution field living on the grid's time levels.
#[derive(Clone, Debug)]
pub struct FundamentalField {
    pub grid: Grid,
    /// One cell-centered field per time level.
    pub field: Vec<Vec<f64>>,
    pub pole: ([f64; 2], f64),
    pub direction: KernelDirection,
    /// Half-width of the tensor hat source.
    pub source_width: f64,
}

impl FundamentalField {
    /// Kernel value at (x, t): spatial bilinear interpolation and linear
    /// interpolation between time levels; zero on the causal dead side.
    pub fn value_at(&self, x: [f64; 2], t: f64) -> f64 {
        let times = &self.grid.times;
        let (_, s) = self.pole;
        match self.direction {
            KernelDirection::Forward if t <= s => return 0.0,
            KernelDirection::Adjoint if t >= s => return 0.0,
            _ => {}
        }
        let m = match times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.grid.interpolate(&self.field[i], x),
            Err(i) => i,
        };
        if m == 0 || m >= times.len() {
            return 0.0;
        }
        let w = (t - times[m - 1]) / (times[m] - times[m - 1]);
        (1.0 - w) * self.grid.interpolate(&self.field[m - 1], x)
            + w * self.grid.interpolate(&self.field[m], x)
    }

    /// Trace on another grid's boundary lattice, level by level.
    pub fn trace(&self, lattice: &BoundaryLattice, host: &Grid) -> BoundaryData {
        let values = host
            .times
            .iter()
            .map(|&t| lattice.faces.iter().map(|f| self.value_at(f.pos, t)).collect())
            .collect();
        BoundaryData { values }
    }

    /// Lattice mass Σ u·hⁿ at a time level.
    pub fn mass(&self, level: usize) -> f64 {
        let hn = self.grid.spacing.powi(self.grid.n as i32);
        self.field[level].iter().sum::<f64>() * hn
    }
}

/// Collar grid for kernel runs: the domain box inflated by ρ₀ plus an
/// absorbing margin, sharing the requested time levels. The pad is snapped
/// to whole cells so that the domain's coordinate lattice (and with it any
/// face-aligned interface) stays face-aligned in the collar grid.
pub fn collar_grid(dom: &Domain, rho0: f64, margin: f64, spacing: f64, times: Vec<f64>) -> Result<Grid> {
    let pad_cells = ((rho0 + margin) / spacing).ceil() as usize;
    let pad = pad_cells as f64 * spacing;
    let nx = (((dom.hi[0] - dom.lo[0]) / spacing).ceil() as usize) + 2 * pad_cells;
    let ny = if dom.n == 2 {
        (((dom.hi[1] - dom.lo[1]) / spacing).ceil() as usize) + 2 * pad_cells
    } else {
        1
    };
    Grid::new(
        dom.n,
        [dom.lo[0] - pad, if dom.n == 2 { dom.lo[1] - pad } else { 0.0 }],
        nx,
        ny,
        spacing,
        times,
    )
}

/// Normalized tensor-product hat of half-width `w` centered at y: exact unit
/// lattice mass when w is a multiple of the spacing.
fn hat_source(grid: &Grid, y: [f64; 2], w: f64) -> Vec<f64> {
    let h = grid.spacing;
    let mut u = vec![0.0; grid.num_cells()];
    let hat = |d: f64| ((1.0 - d.abs() / w).max(0.0)) / w;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let c = grid.cell_center(ix, iy);
            let hx = hat(c[0] - y[0]);
            if hx == 0.0 {
                continue;
            }
            let v = if grid.n == 2 { hx * hat(c[1] - y[1]) } else { hx };
            u[ix + grid.nx * iy] = v;
        }
    }
    // renormalize the lattice mass exactly (boundary clipping, off-lattice y)
    let mass: f64 = u.iter().sum::<f64>() * h.powi(grid.n as i32);
    if mass > 0.0 {
        for v in u.iter_mut() {
            *v /= mass;
        }
    }
    u
}

/// Solve for the mollified fundamental solution with pole (y, s).
///
/// `Forward` requires s to coincide with a grid time level and marches to the
/// window end; `Adjoint` requires the pole time at a level and marches
/// backward via time reversal. Source width is 2·spacing.
pub fn discrete_fundamental(
    y: [f64; 2],
    s: f64,
    inclusion: Option<&InclusionFamily>,
    mat: &Material,
    grid: &Grid,
    direction: KernelDirection,
) -> Result<FundamentalField> {
    let h = grid.spacing;
    let w = 2.0 * h;
    // the source must sit well inside the absorbing box
    let ext = grid.extent();
    let margin_x = (y[0] - grid.origin[0]).min(grid.origin[0] + ext[0] - y[0]);
    let margin_y = if grid.n == 2 {
        (y[1] - grid.origin[1]).min(grid.origin[1] + ext[1] - y[1])
    } else {
        f64::INFINITY
    };
    if margin_x < 6.0 * h || margin_y < 6.0 * h {
        return Err(Error::Precondition(format!(
            "source at ({}, {}) is within 6 cells of the box edge",
            y[0], y[1]
        )));
    }
    let level = grid
        .times
        .iter()
        .position(|&t| (t - s).abs() < 1e-12 * grid.times.last().unwrap().abs().max(1.0))
        .ok_or_else(|| {
            Error::Precondition(format!("pole time {s} is not on the grid's time lattice"))
        })?;

    let lattice = BoundaryLattice::build(grid);
    match direction {
        KernelDirection::Forward => {
            if level + 1 >= grid.times.len() {
                return Err(Error::Precondition("forward pole sits at the window end".into()));
            }
            let sub_times = grid.times[level..].to_vec();
            let sub = Grid::new(grid.n, grid.origin, grid.nx, grid.ny, h, sub_times)?;
            let g = BoundaryData::zero(&lattice, &sub);
            let init = hat_source(grid, y, w);
            let coeff: Coefficient = inclusion.into();
            let sol = solve_with_initial(&g, init, coeff, mat, &sub, Scheme::RannacherCn)?;
            let mut field = vec![vec![0.0; grid.num_cells()]; level];
            field.extend(sol.field);
            Ok(FundamentalField { grid: grid.clone(), field, pole: (y, s), direction, source_width: w })
        }
        KernelDirection::Adjoint => {
            if level == 0 {
                return Err(Error::Precondition("adjoint pole sits at the window start".into()));
            }
            // reversed clock σ = τ − t on the levels up to the pole
            let tau = grid.times[level];
            let rev_times: Vec<f64> = grid.times[..=level].iter().rev().map(|&t| tau - t).collect();
            let sub = Grid::new(grid.n, grid.origin, grid.nx, grid.ny, h, rev_times)?;
            let g = BoundaryData::zero(&lattice, &sub);
            let init = hat_source(grid, y, w);
            let sol = match inclusion {
                Some(f) => solve_with_initial(
                    &g,
                    init,
                    Coefficient::TimeReversed { family: f, tau },
                    mat,
                    &sub,
                    Scheme::RannacherCn,
                )?,
                None => solve_with_initial(&g, init, Coefficient::Uniform, mat, &sub, Scheme::RannacherCn)?,
            };
            let mut field: Vec<Vec<f64>> = sol.field.into_iter().rev().collect();
            field.extend(vec![vec![0.0; grid.num_cells()]; grid.times.len() - level - 1]);
            Ok(FundamentalField { grid: grid.clone(), field, pole: (y, tau), direction, source_width: w })
        }
    }
}
