//! Boundary lattice: the Dirichlet faces of the box, boundary-data samples
//! on faces × time levels, the discrete L² pairing, and outward flux
//! extraction by one-sided second-order stencils.

use super::fv::StepOperator;
use super::Grid;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Face {
    /// Face midpoint.
    pub pos: [f64; 2],
    /// Adjacent interior cell.
    pub cell: usize,
    /// Next cell inward (for the second-order flux stencil).
    pub cell2: usize,
    /// 0 = x-face, 1 = y-face.
    pub axis: usize,
    /// Outward normal sign along the axis.
    pub sign: f64,
    /// Face indices into the StepOperator coefficient arrays.
    pub fx: usize,
    pub fy: usize,
}

/// All outer boundary faces of the grid, in a fixed deterministic order
/// (bottom, top, left, right; n = 1 has just the two interval ends).
#[derive(Clone, Debug)]
pub struct BoundaryLattice {
    pub faces: Vec<Face>,
    pub n: usize,
    pub spacing: f64,
}

impl BoundaryLattice {
    pub fn build(grid: &Grid) -> Self {
        let (nx, ny, h) = (grid.nx, grid.ny, grid.spacing);
        let mut faces = Vec::new();
        if grid.n == 1 {
            faces.push(Face {
                pos: [grid.origin[0], 0.0],
                cell: 0,
                cell2: 1,
                axis: 0,
                sign: -1.0,
                fx: 0,
                fy: 0,
            });
            faces.push(Face {
                pos: [grid.origin[0] + nx as f64 * h, 0.0],
                cell: nx - 1,
                cell2: nx - 2,
                axis: 0,
                sign: 1.0,
                fx: nx,
                fy: 0,
            });
        } else {
            for ix in 0..nx {
                let pos = [grid.origin[0] + (ix as f64 + 0.5) * h, grid.origin[1]];
                faces.push(Face { pos, cell: ix, cell2: ix + nx, axis: 1, sign: -1.0, fx: ix, fy: 0 });
            }
            for ix in 0..nx {
                let pos = [grid.origin[0] + (ix as f64 + 0.5) * h, grid.origin[1] + ny as f64 * h];
                faces.push(Face {
                    pos,
                    cell: ix + nx * (ny - 1),
                    cell2: ix + nx * (ny - 2),
                    axis: 1,
                    sign: 1.0,
                    fx: ix,
                    fy: ny,
                });
            }
            for iy in 0..ny {
                let pos = [grid.origin[0], grid.origin[1] + (iy as f64 + 0.5) * h];
                faces.push(Face {
                    pos,
                    cell: nx * iy,
                    cell2: 1 + nx * iy,
                    axis: 0,
                    sign: -1.0,
                    fx: 0,
                    fy: iy,
                });
            }
            for iy in 0..ny {
                let pos = [grid.origin[0] + nx as f64 * h, grid.origin[1] + (iy as f64 + 0.5) * h];
                faces.push(Face {
                    pos,
                    cell: nx - 1 + nx * iy,
                    cell2: nx - 2 + nx * iy,
                    axis: 0,
                    sign: 1.0,
                    fx: nx,
                    fy: iy,
                });
            }
        }
        BoundaryLattice { faces, n: grid.n, spacing: h }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Surface measure carried by one face sample.
    pub fn face_measure(&self) -> f64 {
        if self.n == 1 {
            1.0
        } else {
            self.spacing
        }
    }
}

/// Values g(x, t) on the boundary lattice × the grid's time levels.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    /// values[m][f]: time level m, face f.
    pub values: Vec<Vec<f64>>,
}

impl BoundaryData {
    pub fn zero(lattice: &BoundaryLattice, grid: &Grid) -> Self {
        BoundaryData { values: vec![vec![0.0; lattice.len()]; grid.times.len()] }
    }

    /// Sample a space-time function on the lattice. The t = t₀ level is
    /// forced to zero so the data stays compatible with u(·, 0) = 0.
    pub fn from_fn(
        lattice: &BoundaryLattice,
        grid: &Grid,
        f: impl Fn([f64; 2], f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.times.len());
        for (m, &t) in grid.times.iter().enumerate() {
            if m == 0 {
                values.push(vec![0.0; lattice.len()]);
            } else {
                values.push(lattice.faces.iter().map(|face| f(face.pos, t)).collect());
            }
        }
        BoundaryData { values }
    }

    pub fn scale_add(&mut self, a: f64, other: &BoundaryData) {
        for (row, orow) in self.values.iter_mut().zip(&other.values) {
            for (v, o) in row.iter_mut().zip(orow) {
                *v += a * o;
            }
        }
    }

    /// Discrete L²(∂Ω×(0,T)) pairing: trapezoid in time, face measure in
    /// space.
    pub fn pair(&self, other: &BoundaryData, lattice: &BoundaryLattice, grid: &Grid) -> f64 {
        let mm = grid.times.len();
        let meas = lattice.face_measure();
        let mut total = 0.0;
        for m in 0..mm {
            let w = time_weight(&grid.times, m);
            let dot: f64 = self.values[m]
                .iter()
                .zip(&other.values[m])
                .map(|(a, b)| a * b)
                .sum();
            total += w * meas * dot;
        }
        total
    }

    pub fn norm(&self, lattice: &BoundaryLattice, grid: &Grid) -> f64 {
        self.pair(self, lattice, grid).sqrt()
    }
}

pub fn time_weight(times: &[f64], m: usize) -> f64 {
    let mm = times.len();
    if mm < 2 {
        return 0.0;
    }
    if m == 0 {
        0.5 * (times[1] - times[0])
    } else if m == mm - 1 {
        0.5 * (times[mm - 1] - times[mm - 2])
    } else {
        0.5 * (times[m + 1] - times[m - 1])
    }
}

/// Outward normal derivative on the boundary lattice from the solution
/// history, by the one-sided quadratic stencil through the face value and
/// the two nearest cell centers.
pub fn boundary_flux(
    field_history: &[Vec<f64>],
    g: &BoundaryData,
    lattice: &BoundaryLattice,
    grid: &Grid,
) -> Result<BoundaryData> {
    if field_history.len() != grid.times.len() {
        return Err(Error::Precondition(format!(
            "field history has {} levels, grid has {}",
            field_history.len(),
            grid.times.len()
        )));
    }
    let h = grid.spacing;
    let mut values = Vec::with_capacity(grid.times.len());
    for (m, field) in field_history.iter().enumerate() {
        let row: Vec<f64> = lattice
            .faces
            .iter()
            .enumerate()
            .map(|(f, face)| {
                let gval = g.values[m][f];
                let u0 = field[face.cell];
                let u1 = field[face.cell2];
                // quadratic through (0, g), (h/2, u0), (3h/2, u1), derivative
                // at the face along the inward coordinate
                let inward = (-8.0 / 3.0 * gval + 3.0 * u0 - u1 / 3.0) / h;
                -inward
            })
            .collect();
        values.push(row);
    }
    Ok(BoundaryData { values })
}

/// Flux weighted by the conductivity (a ∂u/∂ν); relevant when the inclusion
/// touches the boundary, otherwise identical to `boundary_flux` since a = 1
/// near ∂Ω.
pub fn conductive_flux(
    field_history: &[Vec<f64>],
    g: &BoundaryData,
    lattice: &BoundaryLattice,
    grid: &Grid,
    op_per_level: impl Fn(usize) -> StepOperator,
) -> Result<BoundaryData> {
    let mut flux = boundary_flux(field_history, g, lattice, grid)?;
    for m in 0..grid.times.len() {
        let op = op_per_level(m);
        for (f, face) in lattice.faces.iter().enumerate() {
            flux.values[m][f] *= op.face_coeff(face.axis, face.fx, face.fy);
        }
    }
    Ok(flux)
}
