//! Cell-centered finite volumes with harmonic face averaging of the jumping
//! coefficient, θ-scheme time stepping, and a Jacobi-preconditioned CG solve.

use super::boundary::BoundaryLattice;
use super::Grid;
use crate::geometry::InclusionFamily;
use crate::kernels::Material;
use crate::{Error, Result};

/// Per-step spatial operator: face conductivities and the Dirichlet closure.
pub struct StepOperator {
    pub nx: usize,
    pub ny: usize,
    pub n: usize,
    pub h: f64,
    /// vertical faces a_w[ix + (nx+1)·iy], ix = 0..=nx
    pub ax: Vec<f64>,
    /// horizontal faces a_s[ix + nx·iy], iy = 0..=ny (empty for n = 1)
    pub ay: Vec<f64>,
}

/// Conductivity pattern seen by one solve: homogeneous background, an
/// inclusion family, or the time-reversed view used by adjoint kernels.
#[derive(Clone, Copy)]
pub enum Coefficient<'a> {
    Uniform,
    Inclusion(&'a InclusionFamily),
    /// χ(x, τ − σ): rides the inclusion backwards from the reversal time τ.
    TimeReversed { family: &'a InclusionFamily, tau: f64 },
}

impl Coefficient<'_> {
    pub fn contains(&self, x: [f64; 2], t: f64) -> bool {
        match self {
            Coefficient::Uniform => false,
            Coefficient::Inclusion(f) => f.indicator(x, t),
            Coefficient::TimeReversed { family, tau } => family.indicator(x, tau - t),
        }
    }
}

impl<'a> From<Option<&'a InclusionFamily>> for Coefficient<'a> {
    fn from(o: Option<&'a InclusionFamily>) -> Self {
        match o {
            None => Coefficient::Uniform,
            Some(f) => Coefficient::Inclusion(f),
        }
    }
}

/// Sample the conductivity 1 + (k−1)χ_Q at cell centers and build harmonic
/// face averages. Boundary faces take the adjacent cell value.
pub fn build_operator(grid: &Grid, coeff: Coefficient<'_>, mat: &Material, t: f64) -> StepOperator {
    let (nx, ny, h) = (grid.nx, grid.ny, grid.spacing);
    let k = mat.k();
    let mut cell = vec![1.0f64; nx * ny];
    if !matches!(coeff, Coefficient::Uniform) {
        for iy in 0..ny {
            for ix in 0..nx {
                if coeff.contains(grid.cell_center(ix, iy), t) {
                    cell[ix + nx * iy] = k;
                }
            }
        }
    }
    let harm = |a: f64, b: f64| 2.0 * a * b / (a + b);
    let mut ax = vec![0.0f64; (nx + 1) * ny];
    for iy in 0..ny {
        for ix in 0..=nx {
            ax[ix + (nx + 1) * iy] = if ix == 0 {
                cell[nx * iy]
            } else if ix == nx {
                cell[nx - 1 + nx * iy]
            } else {
                harm(cell[ix - 1 + nx * iy], cell[ix + nx * iy])
            };
        }
    }
    let mut ay = Vec::new();
    if grid.n == 2 {
        ay = vec![0.0f64; nx * (ny + 1)];
        for iy in 0..=ny {
            for ix in 0..nx {
                ay[ix + nx * iy] = if iy == 0 {
                    cell[ix]
                } else if iy == ny {
                    cell[ix + nx * (ny - 1)]
                } else {
                    harm(cell[ix + nx * (iy - 1)], cell[ix + nx * iy])
                };
            }
        }
    }
    StepOperator { nx, ny, n: grid.n, h, ax, ay }
}

impl StepOperator {
    /// y = A·u where A is the (SPD) stiffness: interior fluxes plus the
    /// Dirichlet half-cell closure on the outer boundary, per unit volume.
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.nx, self.ny);
        let inv_h2 = 1.0 / (self.h * self.h);
        for iy in 0..ny {
            for ix in 0..nx {
                let i = ix + nx * iy;
                let mut acc = 0.0;
                let aw = self.ax[ix + (nx + 1) * iy];
                let ae = self.ax[ix + 1 + (nx + 1) * iy];
                if ix > 0 {
                    acc += aw * (u[i] - u[i - 1]);
                } else {
                    acc += 2.0 * aw * u[i];
                }
                if ix + 1 < nx {
                    acc += ae * (u[i] - u[i + 1]);
                } else {
                    acc += 2.0 * ae * u[i];
                }
                if self.n == 2 {
                    let as_ = self.ay[ix + nx * iy];
                    let an = self.ay[ix + nx * (iy + 1)];
                    if iy > 0 {
                        acc += as_ * (u[i] - u[i - nx]);
                    } else {
                        acc += 2.0 * as_ * u[i];
                    }
                    if iy + 1 < ny {
                        acc += an * (u[i] - u[i + nx]);
                    } else {
                        acc += 2.0 * an * u[i];
                    }
                }
                out[i] = acc * inv_h2;
            }
        }
    }

    /// Dirichlet boundary contribution: b_i = Σ 2·a_face·g_face / h².
    pub fn boundary_rhs(&self, lattice: &BoundaryLattice, g_at_level: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let inv_h2 = 1.0 / (self.h * self.h);
        for (f, face) in lattice.faces.iter().enumerate() {
            let a = self.face_coeff(face.axis, face.fx, face.fy);
            out[face.cell] += 2.0 * a * g_at_level[f] * inv_h2;
        }
    }

    pub fn face_coeff(&self, axis: usize, fx: usize, fy: usize) -> f64 {
        if axis == 0 {
            self.ax[fx + (self.nx + 1) * fy]
        } else {
            self.ay[fx + self.nx * fy]
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let inv_h2 = 1.0 / (self.h * self.h);
        let mut d = vec![0.0; nx * ny];
        for iy in 0..ny {
            for ix in 0..nx {
                let i = ix + nx * iy;
                let aw = self.ax[ix + (nx + 1) * iy];
                let ae = self.ax[ix + 1 + (nx + 1) * iy];
                let mut acc = if ix > 0 { aw } else { 2.0 * aw } + if ix + 1 < nx { ae } else { 2.0 * ae };
                if self.n == 2 {
                    let as_ = self.ay[ix + nx * iy];
                    let an = self.ay[ix + nx * (iy + 1)];
                    acc += if iy > 0 { as_ } else { 2.0 * as_ } + if iy + 1 < ny { an } else { 2.0 * an };
                }
                d[i] = acc * inv_h2;
            }
        }
        d
    }
}

/// Jacobi-preconditioned conjugate gradients for (c·I + θ·A)·u = rhs.
/// Single-threaded, deterministic.
pub fn cg_solve(
    op: &StepOperator,
    mass: f64,
    theta: f64,
    rhs: &[f64],
    u: &mut [f64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<usize> {
    let m = rhs.len();
    let mut diag = op.diagonal();
    for d in diag.iter_mut() {
        *d = 1.0 / (mass + theta * *d);
    }
    let apply = |x: &[f64], y: &mut [f64], scratch: &mut [f64]| {
        op.apply(x, scratch);
        for i in 0..m {
            y[i] = mass * x[i] + theta * scratch[i];
        }
    };
    let mut scratch = vec![0.0; m];
    let mut r = vec![0.0; m];
    let mut au = vec![0.0; m];
    apply(u, &mut au, &mut scratch);
    for i in 0..m {
        r[i] = rhs[i] - au[i];
    }
    let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for it in 0..max_iter {
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol_rel * rhs_norm {
            return Ok(it);
        }
        let mut ap = vec![0.0; m];
        apply(&p, &mut ap, &mut scratch);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(Error::LinearSolve { iterations: it, residual: rnorm / rhs_norm });
        }
        let alpha = rz / pap;
        for i in 0..m {
            u[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..m {
            z[i] = r[i] * diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rnorm <= 10.0 * tol_rel * rhs_norm {
        Ok(max_iter)
    } else {
        Err(Error::LinearSolve { iterations: max_iter, residual: rnorm / rhs_norm })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_is_symmetric() {
        let grid = Grid::new(2, [0.0, 0.0], 12, 10, 0.1, Grid::uniform_times(0.0, 1.0, 4)).unwrap();
        let inc = InclusionFamily::parse_recipe(2, "disk cx=0.6 cy=0.5 r=0.25").unwrap();
        let mat = Material::new(4.0).unwrap();
        let op = build_operator(&grid, Coefficient::Inclusion(&inc), &mat, 0.0);
        let m = grid.num_cells();
        let mut rng = crate::rng::Rng::seed_from(9);
        for _ in 0..5 {
            let u: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
            let v: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
            let mut au = vec![0.0; m];
            let mut av = vec![0.0; m];
            op.apply(&u, &mut au);
            op.apply(&v, &mut av);
            let vau: f64 = v.iter().zip(&au).map(|(a, b)| a * b).sum();
            let uav: f64 = u.iter().zip(&av).map(|(a, b)| a * b).sum();
            assert!((vau - uav).abs() < 1e-9 * vau.abs().max(1.0));
        }
    }

    #[test]
    fn cg_solves_poisson_to_tolerance() {
        let grid = Grid::new(2, [0.0, 0.0], 20, 20, 0.05, Grid::uniform_times(0.0, 1.0, 4)).unwrap();
        let mat = Material::new(4.0).unwrap();
        let op = build_operator(&grid, Coefficient::Uniform, &mat, 0.0);
        let m = grid.num_cells();
        let mut rng = crate::rng::Rng::seed_from(4);
        let truth: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
        let mut rhs = vec![0.0; m];
        op.apply(&truth, &mut rhs);
        for i in 0..m {
            rhs[i] += 3.0 * truth[i];
        }
        let mut u = vec![0.0; m];
        let iters = cg_solve(&op, 3.0, 1.0, &rhs, &mut u, 1e-12, 4000).unwrap();
        let err: f64 = u
            .iter()
            .zip(&truth)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-8, "err {err} after {iters} iters");
    }
}
