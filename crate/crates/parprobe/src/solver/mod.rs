//! Forward simulation of the parabolic transmission problem and the discrete
//! Dirichlet-to-Neumann map.

pub mod boundary;
pub mod dtn;
pub mod forward;
pub mod fundamental;
pub mod fv;

pub use boundary::{boundary_flux, BoundaryData, BoundaryLattice};
pub use dtn::{assemble_dtn, DiscreteDtN, DtnBasis, NoiseOverlay};
pub use forward::{solve_forward, Scheme, Solution};
pub use fundamental::{discrete_fundamental, FundamentalField, KernelDirection};

use crate::{Error, Result};

/// Space-time lattice: a box of square cells plus a strictly increasing list
/// of time levels (nonuniform steps allowed).
#[derive(Clone, Debug)]
pub struct Grid {
    pub n: usize,
    pub origin: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    /// t₀ < t₁ < … < t_M; the solution lives on these levels.
    pub times: Vec<f64>,
}

impl Grid {
    pub fn new(
        n: usize,
        origin: [f64; 2],
        nx: usize,
        ny: usize,
        spacing: f64,
        times: Vec<f64>,
    ) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::Precondition(format!("grid dimension must be 1 or 2, got {n}")));
        }
        if n == 1 && ny != 1 {
            return Err(Error::Precondition("1-D grids must have ny = 1".into()));
        }
        if !(spacing > 0.0) || nx < 3 || (n == 2 && ny < 3) {
            return Err(Error::Precondition("grid needs spacing > 0 and at least 3 cells per axis".into()));
        }
        if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("time levels must be strictly increasing".into()));
        }
        Ok(Grid { n, origin, nx, ny, spacing, times })
    }

    pub fn uniform_times(t0: f64, t_end: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|m| t0 + (t_end - t0) * m as f64 / steps as f64).collect()
    }

    /// Time levels refined geometrically toward both window ends, for kernel
    /// runs whose poles sit at the ends.
    pub fn graded_times(t0: f64, t_end: f64, dt_min: f64, dt_max: f64, ratio: f64) -> Vec<f64> {
        assert!(t_end > t0 && dt_min > 0.0 && ratio > 1.0);
        let span = t_end - t0;
        let mut fwd = vec![0.0f64];
        let mut dt = dt_min;
        while *fwd.last().unwrap() < span / 2.0 {
            let next = fwd.last().unwrap() + dt;
            fwd.push(next.min(span / 2.0));
            dt = (dt * ratio).min(dt_max);
        }
        let mut times: Vec<f64> = fwd.iter().map(|&s| t0 + s).collect();
        for s in fwd.iter().rev().skip(1) {
            times.push(t_end - s);
        }
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * span.max(1.0));
        times
    }

    pub fn num_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [
            self.origin[0] + (ix as f64 + 0.5) * self.spacing,
            if self.n == 2 { self.origin[1] + (iy as f64 + 0.5) * self.spacing } else { 0.0 },
        ]
    }

    pub fn extent(&self) -> [f64; 2] {
        [self.nx as f64 * self.spacing, self.ny as f64 * self.spacing]
    }

    /// Cell containing x, clamped into range.
    pub fn cell_of(&self, x: [f64; 2]) -> (usize, usize) {
        let ix = (((x[0] - self.origin[0]) / self.spacing).floor().max(0.0) as usize).min(self.nx - 1);
        let iy = if self.n == 2 {
            (((x[1] - self.origin[1]) / self.spacing).floor().max(0.0) as usize).min(self.ny - 1)
        } else {
            0
        };
        (ix, iy)
    }

    /// Bilinear interpolation of a cell-centered field at x.
    pub fn interpolate(&self, field: &[f64], x: [f64; 2]) -> f64 {
        let h = self.spacing;
        let px = (x[0] - self.origin[0]) / h - 0.5;
        let ix = (px.floor().max(0.0) as usize).min(self.nx - 2);
        let wx = (px - ix as f64).clamp(0.0, 1.0);
        if self.n == 1 {
            return field[ix] * (1.0 - wx) + field[ix + 1] * wx;
        }
        let py = (x[1] - self.origin[1]) / h - 0.5;
        let iy = (py.floor().max(0.0) as usize).min(self.ny - 2);
        let wy = (py - iy as f64).clamp(0.0, 1.0);
        let f = |i: usize, j: usize| field[i + self.nx * j];
        f(ix, iy) * (1.0 - wx) * (1.0 - wy)
            + f(ix + 1, iy) * wx * (1.0 - wy)
            + f(ix, iy + 1) * (1.0 - wx) * wy
            + f(ix + 1, iy + 1) * wx * wy
    }

    /// Central-difference gradient of a cell-centered field at cell (ix, iy)
    /// (one-sided at the box edge).
    pub fn gradient_at_cell(&self, field: &[f64], ix: usize, iy: usize) -> [f64; 2] {
        let h = self.spacing;
        let f = |i: usize, j: usize| field[i + self.nx * j];
        let gx = if ix == 0 {
            (f(1, iy) - f(0, iy)) / h
        } else if ix == self.nx - 1 {
            (f(ix, iy) - f(ix - 1, iy)) / h
        } else {
            (f(ix + 1, iy) - f(ix - 1, iy)) / (2.0 * h)
        };
        let gy = if self.n == 1 {
            0.0
        } else if iy == 0 {
            (f(ix, 1) - f(ix, 0)) / h
        } else if iy == self.ny - 1 {
            (f(ix, iy) - f(ix, iy - 1)) / h
        } else {
            (f(ix, iy + 1) - f(ix, iy - 1)) / (2.0 * h)
        };
        [gx, gy]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_times_cover_window() {
        let times = Grid::graded_times(0.2, 0.3, 1e-4, 5e-3, 1.3);
        assert!((times[0] - 0.2).abs() < 1e-15);
        assert!((times.last().unwrap() - 0.3).abs() < 1e-14);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
        // refined at both ends
        assert!(times[1] - times[0] < 2e-4);
        let m = times.len();
        assert!(times[m - 1] - times[m - 2] < 2e-4);
    }

    #[test]
    fn interpolation_reproduces_linear_fields() {
        let g = Grid::new(2, [0.0, 0.0], 8, 8, 0.125, Grid::uniform_times(0.0, 1.0, 2)).unwrap();
        let mut field = vec![0.0; 64];
        for iy in 0..8 {
            for ix in 0..8 {
                let c = g.cell_center(ix, iy);
                field[ix + 8 * iy] = 2.0 * c[0] - 3.0 * c[1] + 0.25;
            }
        }
        let x = [0.43, 0.61];
        let v = g.interpolate(&field, x);
        assert!((v - (2.0 * x[0] - 3.0 * x[1] + 0.25)).abs() < 1e-12);
    }
}
