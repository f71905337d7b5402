//! Forward solve of ∂_t u − div((1 + (k−1)χ_Q)∇u) = 0 with u(·,0) = 0 and
//! Dirichlet data on the boundary lattice.

use super::boundary::{boundary_flux, BoundaryData, BoundaryLattice};
use super::fv::{build_operator, cg_solve, Coefficient};
use super::Grid;
use crate::geometry::InclusionFamily;
use crate::kernels::Material;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Implicit Euler (default; damps rough data).
    ImplicitEuler,
    /// Crank–Nicolson (second order in dt; smooth data only).
    CrankNicolson,
    /// Crank–Nicolson with an implicit-Euler startup that damps the ringing
    /// CN would keep from rough initial data (mollified point sources).
    RannacherCn,
}

impl Scheme {
    fn theta_at(self, step: usize) -> f64 {
        match self {
            Scheme::ImplicitEuler => 1.0,
            Scheme::CrankNicolson => 0.5,
            Scheme::RannacherCn => {
                if step <= 6 {
                    1.0
                } else {
                    0.5
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Field at every time level (cell-centered).
    pub field: Vec<Vec<f64>>,
    /// Outward normal derivative on the boundary lattice.
    pub flux: BoundaryData,
    /// Total CG iterations, for diagnostics.
    pub cg_iterations: usize,
}

/// Run the θ-scheme from the given initial field (normally zero) through the
/// grid's time levels. The coefficient is re-sampled from the inclusion at
/// each target level; within a step it is frozen.
pub fn solve_with_initial(
    g: &BoundaryData,
    initial: Vec<f64>,
    coeff: Coefficient<'_>,
    mat: &Material,
    grid: &Grid,
    scheme: Scheme,
) -> Result<Solution> {
    let lattice = BoundaryLattice::build(grid);
    if g.values.len() != grid.times.len() || g.values[0].len() != lattice.len() {
        return Err(Error::Precondition(format!(
            "boundary data lattice mismatch: {}x{} data vs {}x{} grid",
            g.values.len(),
            g.values[0].len(),
            grid.times.len(),
            lattice.len()
        )));
    }
    let m = grid.num_cells();
    if initial.len() != m {
        return Err(Error::Precondition("initial field size mismatch".into()));
    }
    let mut field = Vec::with_capacity(grid.times.len());
    field.push(initial);
    let mut total_iters = 0usize;

    let mut op_prev = build_operator(grid, coeff, mat, grid.times[0]);
    let mut b_prev = vec![0.0; m];
    op_prev.boundary_rhs(&lattice, &g.values[0], &mut b_prev);

    let mut scratch = vec![0.0; m];
    for step in 1..grid.times.len() {
        let theta = scheme.theta_at(step);
        let t_new = grid.times[step];
        let dt = t_new - grid.times[step - 1];
        let op_new = build_operator(grid, coeff, mat, t_new);
        let mut b_new = vec![0.0; m];
        op_new.boundary_rhs(&lattice, &g.values[step], &mut b_new);

        let u_old = &field[step - 1];
        // rhs = u_old/dt − (1−θ)(A_old·u_old − b_old) + θ·b_new
        op_prev.apply(u_old, &mut scratch);
        let mut rhs = vec![0.0; m];
        for i in 0..m {
            rhs[i] = u_old[i] / dt - (1.0 - theta) * (scratch[i] - b_prev[i]) + theta * b_new[i];
        }
        let mut u_new = u_old.clone();
        let iters = cg_solve(&op_new, 1.0 / dt, theta, &rhs, &mut u_new, 1e-11, 40 * (m as f64).sqrt() as usize + 200)?;
        total_iters += iters;
        field.push(u_new);
        op_prev = op_new;
        b_prev = b_new;
    }

    let flux = boundary_flux(&field, g, &lattice, grid)?;
    Ok(Solution { field, flux, cg_iterations: total_iters })
}

/// Standard forward problem: zero initial data.
pub fn solve_forward(
    g: &BoundaryData,
    inclusion: Option<&InclusionFamily>,
    mat: &Material,
    grid: &Grid,
    scheme: Scheme,
) -> Result<Solution> {
    solve_with_initial(g, vec![0.0; grid.num_cells()], inclusion.into(), mat, grid, scheme)
}

/// Stationary solve div(a∇u) = 0 with the boundary values of `g` at the last
/// time level, converged to machine precision. Exposes the exactness of the
/// harmonic face averaging on piecewise-linear two-phase profiles.
pub fn solve_steady(
    g_last: &[f64],
    inclusion: Option<&InclusionFamily>,
    mat: &Material,
    grid: &Grid,
    t_coeff: f64,
) -> Result<Vec<f64>> {
    let lattice = BoundaryLattice::build(grid);
    if g_last.len() != lattice.len() {
        return Err(Error::Precondition("boundary value count mismatch".into()));
    }
    let coeff: Coefficient = inclusion.into();
    let op = build_operator(grid, coeff, mat, t_coeff);
    let m = grid.num_cells();
    let mut b = vec![0.0; m];
    op.boundary_rhs(&lattice, g_last, &mut b);
    let mut u = vec![0.0; m];
    cg_solve(&op, 0.0, 1.0, &b, &mut u, 1e-15, 200 * (m as f64).sqrt() as usize + 1000)?;
    Ok(u)
}
