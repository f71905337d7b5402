//! The discrete Dirichlet-to-Neumann map Λ_Q: exact application by forward
//! solve, explicit column assembly over a boundary basis, the lattice
//! operator norm on the assembled span, a calibrated noise overlay, and the
//! binary matrix format.

use super::boundary::{BoundaryData, BoundaryLattice};
use super::forward::{solve_forward, Scheme};
use super::Grid;
use crate::geometry::InclusionFamily;
use crate::kernels::Material;
use crate::rng::Rng;
use crate::{Error, Result};
use rayon::prelude::*;
use std::io::{BufReader, Read, Write};
use std::path::Path;

/// Boundary basis: each element is lattice data spanning a subspace of
/// H-like boundary inputs.
#[derive(Clone, Debug)]
pub struct DtnBasis {
    pub elements: Vec<BoundaryData>,
}

impl DtnBasis {
    /// Nodal hats in space × time, optionally strided to keep assembly
    /// affordable. A hat peaks at one (face, level) pair and falls linearly
    /// to zero at the strided neighbors; the t₀ level is excluded
    /// (compatibility with u(·,0) = 0).
    pub fn nodal(lattice: &BoundaryLattice, grid: &Grid, stride_space: usize, stride_time: usize) -> Self {
        let nf = lattice.len();
        let nt = grid.times.len();
        let mut elements = Vec::new();
        let hat = |d: f64, w: f64| (1.0 - d.abs() / w).max(0.0);
        for f0 in (0..nf).step_by(stride_space.max(1)) {
            for m0 in (1..nt).step_by(stride_time.max(1)) {
                let mut values = vec![vec![0.0; nf]; nt];
                for (m, row) in values.iter_mut().enumerate().skip(1) {
                    let wt = hat(m as f64 - m0 as f64, stride_time.max(1) as f64);
                    if wt == 0.0 {
                        continue;
                    }
                    for (f, v) in row.iter_mut().enumerate() {
                        let ws = hat(f as f64 - f0 as f64, stride_space.max(1) as f64);
                        *v = wt * ws;
                    }
                }
                elements.push(BoundaryData { values });
            }
        }
        DtnBasis { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Rank-limited random perturbation with calibrated lattice operator norm,
/// standing in for entrywise white noise on the DtN matrix at lattice sizes
/// where a dense matrix is impractical.
#[derive(Clone, Copy, Debug)]
pub struct NoiseOverlay {
    pub eps: f64,
    pub rank: usize,
    pub seed: u64,
}

/// The discrete DtN map for one inclusion. Application is always exact
/// (one forward solve); `assemble` additionally materializes flux columns
/// over a basis, enabling operator-norm evaluation.
#[derive(Clone, Debug)]
pub struct DiscreteDtN {
    pub grid: Grid,
    pub mat: Material,
    pub inclusion: Option<InclusionFamily>,
    pub scheme: Scheme,
    pub noise: Option<NoiseOverlay>,
    pub basis: Option<DtnBasis>,
    pub columns: Option<Vec<BoundaryData>>,
}

impl DiscreteDtN {
    pub fn new(grid: Grid, mat: Material, inclusion: Option<InclusionFamily>, scheme: Scheme) -> Self {
        DiscreteDtN { grid, mat, inclusion, scheme, noise: None, basis: None, columns: None }
    }

    pub fn with_noise(mut self, noise: NoiseOverlay) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn lattice(&self) -> BoundaryLattice {
        BoundaryLattice::build(&self.grid)
    }

    /// Λ_Q g: forward solve and outward flux, plus the noise overlay.
    pub fn apply(&self, g: &BoundaryData) -> Result<BoundaryData> {
        let sol = solve_forward(g, self.inclusion.as_ref(), &self.mat, &self.grid, self.scheme)?;
        let mut flux = sol.flux;
        if let Some(noise) = &self.noise {
            let lattice = self.lattice();
            apply_noise(noise, g, &mut flux, &lattice, &self.grid);
        }
        Ok(flux)
    }

    /// Assemble flux columns for the basis (independent solves in parallel;
    /// results ordered by basis index).
    pub fn assemble(&mut self, basis: DtnBasis) -> Result<()> {
        let cols: Result<Vec<BoundaryData>> = basis
            .elements
            .par_iter()
            .map(|g| {
                let sol = solve_forward(g, self.inclusion.as_ref(), &self.mat, &self.grid, self.scheme)?;
                Ok(sol.flux)
            })
            .collect();
        let mut cols = cols?;
        if let Some(noise) = &self.noise {
            let lattice = self.lattice();
            for (g, col) in basis.elements.iter().zip(cols.iter_mut()) {
                apply_noise(noise, g, col, &lattice, &self.grid);
            }
        }
        self.basis = Some(basis);
        self.columns = Some(cols);
        Ok(())
    }

    /// Lattice operator norm of Λ restricted to the assembled basis span:
    /// the largest generalized singular value of the flux Gram matrix
    /// against the input Gram matrix.
    pub fn operator_norm(&self) -> Result<f64> {
        let basis = self.basis.as_ref().ok_or_else(|| {
            Error::Precondition("operator_norm requires an assembled basis".into())
        })?;
        let cols = self.columns.as_ref().unwrap();
        span_norm(basis, cols, &self.lattice(), &self.grid)
    }

    /// ‖Λ_self − Λ_other‖ on self's assembled basis (the two maps must share
    /// grid and basis).
    pub fn difference_norm(&self, other: &DiscreteDtN) -> Result<f64> {
        let basis = self.basis.as_ref().ok_or_else(|| {
            Error::Precondition("difference_norm requires an assembled basis".into())
        })?;
        let (ca, cb) = (self.columns.as_ref().unwrap(), other.columns.as_ref().ok_or_else(|| {
            Error::Precondition("other map has no assembled columns".into())
        })?);
        if ca.len() != cb.len() {
            return Err(Error::Precondition("assembled bases differ in size".into()));
        }
        let diff: Vec<BoundaryData> = ca
            .iter()
            .zip(cb)
            .map(|(a, b)| {
                let mut d = a.clone();
                d.scale_add(-1.0, b);
                d
            })
            .collect();
        span_norm(basis, &diff, &self.lattice(), &self.grid)
    }

    /// Binary matrix dump: `u64 rows, u64 cols` header then row-major f64
    /// little-endian entries. Rows run over (time level, face) flattened,
    /// columns over basis elements.
    pub fn write_matrix(&self, path: &Path) -> Result<()> {
        let cols = self.columns.as_ref().ok_or_else(|| {
            Error::Precondition("write_matrix requires assembled columns".into())
        })?;
        let nt = self.grid.times.len();
        let nf = self.lattice().len();
        let rows = nt * nf;
        let mut f = std::fs::File::create(path)?;
        f.write_all(&(rows as u64).to_le_bytes())?;
        f.write_all(&(cols.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(rows * cols.len() * 8);
        for m in 0..nt {
            for face in 0..nf {
                for col in cols {
                    buf.extend_from_slice(&col.values[m][face].to_le_bytes());
                }
            }
        }
        f.write_all(&buf)?;
        Ok(())
    }
}

/// Read back a binary DtN matrix (rows, cols, entries).
pub fn read_matrix(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut hdr = [0u8; 16];
    r.read_exact(&mut hdr)?;
    let rows = u64::from_le_bytes(hdr[..8].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(hdr[8..].try_into().unwrap()) as usize;
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() != rows * cols * 8 {
        return Err(Error::Config(format!(
            "matrix body has {} bytes, expected {}",
            buf.len(),
            rows * cols * 8
        )));
    }
    let vals = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((rows, cols, vals))
}

/// Convenience constructor: build and assemble in one call.
pub fn assemble_dtn(
    inclusion: Option<&InclusionFamily>,
    mat: &Material,
    grid: &Grid,
    basis: DtnBasis,
) -> Result<DiscreteDtN> {
    if basis.is_empty() {
        return Err(Error::EmptySet("DtN basis"));
    }
    let mut map = DiscreteDtN::new(grid.clone(), *mat, inclusion.cloned(), Scheme::ImplicitEuler);
    map.assemble(basis)?;
    Ok(map)
}

/// max over span of ‖Σ c_j F_j‖ / ‖Σ c_j φ_j‖ via the generalized symmetric
/// eigenproblem B c = λ G c solved by Cholesky + power iteration.
fn span_norm(
    basis: &DtnBasis,
    images: &[BoundaryData],
    lattice: &BoundaryLattice,
    grid: &Grid,
) -> Result<f64> {
    let nb = basis.len();
    let mut gmat = vec![0.0f64; nb * nb];
    let mut bmat = vec![0.0f64; nb * nb];
    for i in 0..nb {
        for j in i..nb {
            let gij = basis.elements[i].pair(&basis.elements[j], lattice, grid);
            let bij = images[i].pair(&images[j], lattice, grid);
            gmat[i * nb + j] = gij;
            gmat[j * nb + i] = gij;
            bmat[i * nb + j] = bij;
            bmat[j * nb + i] = bij;
        }
    }
    // regularize against numerically dependent basis elements
    let gscale = (0..nb).map(|i| gmat[i * nb + i]).fold(0.0f64, f64::max);
    for i in 0..nb {
        gmat[i * nb + i] += 1e-12 * gscale;
    }
    let l = cholesky(&gmat, nb)
        .ok_or_else(|| Error::Precondition("basis Gram matrix is not positive definite".into()))?;
    // power iteration on L⁻¹ B L⁻ᵀ
    let mut v = vec![0.0f64; nb];
    for (i, vi) in v.iter_mut().enumerate() {
        *vi = 1.0 + (i as f64) * 1e-3;
    }
    let mut lam = 0.0f64;
    for _ in 0..300 {
        // w = L⁻ᵀ v, u = B w, z = L⁻¹ u
        let w = solve_lt(&l, nb, &v);
        let mut u = vec![0.0; nb];
        for i in 0..nb {
            let mut acc = 0.0;
            for j in 0..nb {
                acc += bmat[i * nb + j] * w[j];
            }
            u[i] = acc;
        }
        let z = solve_l(&l, nb, &u);
        let norm = z.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Ok(0.0);
        }
        let new_lam = norm;
        let done = (new_lam - lam).abs() <= 1e-10 * new_lam.max(1e-300);
        lam = new_lam;
        for i in 0..nb {
            v[i] = z[i] / norm;
        }
        if done {
            break;
        }
    }
    Ok(lam.sqrt())
}

fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn solve_l(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

fn solve_lt(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// flux += ε Σ_l u_l ⟨v_l, g⟩ with (u_l), (v_l) orthonormal in the lattice
/// inner product: the perturbation's operator norm is exactly ε.
fn apply_noise(
    noise: &NoiseOverlay,
    g: &BoundaryData,
    flux: &mut BoundaryData,
    lattice: &BoundaryLattice,
    grid: &Grid,
) {
    let mut rng = Rng::seed_from(noise.seed);
    let mut us = Vec::with_capacity(noise.rank);
    let mut vs = Vec::with_capacity(noise.rank);
    for _ in 0..noise.rank {
        us.push(random_orthonormal(&mut rng, &mut us_clone(&us), lattice, grid));
        vs.push(random_orthonormal(&mut rng, &mut us_clone(&vs), lattice, grid));
    }
    for l in 0..noise.rank {
        let coef = noise.eps * vs[l].pair(g, lattice, grid);
        flux.scale_add(coef, &us[l]);
    }
}

fn us_clone(v: &[BoundaryData]) -> Vec<BoundaryData> {
    v.to_vec()
}

fn random_orthonormal(
    rng: &mut Rng,
    prior: &mut [BoundaryData],
    lattice: &BoundaryLattice,
    grid: &Grid,
) -> BoundaryData {
    let nt = grid.times.len();
    let nf = lattice.len();
    let mut w = BoundaryData { values: vec![vec![0.0; nf]; nt] };
    for row in w.values.iter_mut().skip(1) {
        for v in row.iter_mut() {
            *v = rng.normal();
        }
    }
    for p in prior.iter() {
        let c = p.pair(&w, lattice, grid);
        w.scale_add(-c, p);
    }
    let n = w.norm(lattice, grid).max(1e-300);
    for row in w.values.iter_mut() {
        for v in row.iter_mut() {
            *v /= n;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> Grid {
        Grid::new(2, [0.0, 0.0], 16, 16, 1.0 / 16.0, Grid::uniform_times(0.0, 0.4, 16)).unwrap()
    }

    fn mat() -> Material {
        Material::new(4.0).unwrap()
    }

    #[test]
    fn identical_inclusions_have_zero_difference() {
        let grid = small_grid();
        let lat = BoundaryLattice::build(&grid);
        let inc = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.2").unwrap();
        let basis = DtnBasis::nodal(&lat, &grid, 8, 4);
        let a = assemble_dtn(Some(&inc), &mat(), &grid, basis.clone()).unwrap();
        let b = assemble_dtn(Some(&inc), &mat(), &grid, basis).unwrap();
        let d = a.difference_norm(&b).unwrap();
        let scale = a.operator_norm().unwrap();
        assert!(d < 1e-8 * scale, "difference {d} vs scale {scale}");
    }

    #[test]
    fn application_is_linear() {
        let grid = small_grid();
        let lat = BoundaryLattice::build(&grid);
        let inc = InclusionFamily::parse_recipe(2, "disk cx=0.45 cy=0.55 r=0.2").unwrap();
        let map = DiscreteDtN::new(grid.clone(), mat(), Some(inc), Scheme::ImplicitEuler);
        let g1 = BoundaryData::from_fn(&lat, &grid, |x, t| (t * 4.0).min(1.0) * x[0]);
        let g2 = BoundaryData::from_fn(&lat, &grid, |x, t| (t * 3.0).min(1.0) * (x[1] - 0.3));
        let alpha = 1.7;
        let mut combo = g1.clone();
        for (row, r1) in combo.values.iter_mut().zip(&g2.values) {
            for (v, w) in row.iter_mut().zip(r1) {
                *v = alpha * *v + w;
            }
        }
        let f_combo = map.apply(&combo).unwrap();
        let f1 = map.apply(&g1).unwrap();
        let f2 = map.apply(&g2).unwrap();
        let mut expect = f1.clone();
        for (row, r2) in expect.values.iter_mut().zip(&f2.values) {
            for (v, w) in row.iter_mut().zip(r2) {
                *v = alpha * *v + w;
            }
        }
        let mut diff = f_combo.clone();
        diff.scale_add(-1.0, &expect);
        let rel = diff.norm(&lat, &grid) / expect.norm(&lat, &grid);
        assert!(rel < 1e-8, "linearity violated at {rel}");
    }

    #[test]
    fn shrinking_inclusion_drives_difference_to_zero() {
        let grid = small_grid();
        let lat = BoundaryLattice::build(&grid);
        let basis = DtnBasis::nodal(&lat, &grid, 8, 4);
        let empty = assemble_dtn(None, &mat(), &grid, basis.clone()).unwrap();
        let mut norms = Vec::new();
        for r in [0.25, 0.18, 0.12, 0.06] {
            let inc = InclusionFamily::parse_recipe(2, &format!("disk cx=0.5 cy=0.5 r={r}")).unwrap();
            let m = assemble_dtn(Some(&inc), &mat(), &grid, basis.clone()).unwrap();
            norms.push(m.difference_norm(&empty).unwrap());
        }
        for w in norms.windows(2) {
            assert!(w[1] < w[0], "norms not decreasing: {norms:?}");
        }
        assert!(norms.last().unwrap() < &(0.2 * norms[0]), "{norms:?}");
    }

    #[test]
    fn adjoint_pairing_consistency() {
        // ⟨Λg, φ⟩ = ⟨g, Λ*φ⟩ with Λ* realized by time reversal (static Q);
        // Crank–Nicolson is the time-symmetric scheme
        let grid = small_grid();
        let lat = BoundaryLattice::build(&grid);
        let inc = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.22").unwrap();
        let map = DiscreteDtN::new(grid.clone(), mat(), Some(inc), Scheme::CrankNicolson);
        // time bumps vanishing at both window ends keep the reversal clean
        let t_end = *grid.times.last().unwrap();
        let bump = move |t: f64| (std::f64::consts::PI * t / t_end).sin().powi(2);
        let g = BoundaryData::from_fn(&lat, &grid, |x, t| bump(t) * (1.0 + x[0] - x[1]));
        let phi = BoundaryData::from_fn(&lat, &grid, |x, t| bump(t) * (0.5 + x[1]));
        let reverse = |b: &BoundaryData| -> BoundaryData {
            let nt = b.values.len();
            let mut rev: Vec<Vec<f64>> = (0..nt).map(|m| b.values[nt - 1 - m].clone()).collect();
            rev[0].iter_mut().for_each(|v| *v = 0.0);
            BoundaryData { values: rev }
        };
        let lhs = map.apply(&g).unwrap().pair(&phi, &lat, &grid);
        let rhs_flux = reverse(&map.apply(&reverse(&phi)).unwrap());
        let rhs = g.pair(&rhs_flux, &lat, &grid);
        let scale = lhs.abs().max(rhs.abs());
        assert!(
            (lhs - rhs).abs() < 0.02 * scale,
            "adjoint consistency: {lhs} vs {rhs}"
        );
    }

    #[test]
    fn noise_overlay_norm_is_calibrated() {
        let grid = small_grid();
        let lat = BoundaryLattice::build(&grid);
        let inc = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.2").unwrap();
        let eps = 1e-3;
        let clean = DiscreteDtN::new(grid.clone(), mat(), Some(inc.clone()), Scheme::ImplicitEuler);
        let noisy = DiscreteDtN::new(grid.clone(), mat(), Some(inc), Scheme::ImplicitEuler)
            .with_noise(NoiseOverlay { eps, rank: 8, seed: 7 });
        let g = BoundaryData::from_fn(&lat, &grid, |x, t| (t * 5.0).min(1.0) * (x[0] + 0.3));
        let fc = clean.apply(&g).unwrap();
        let fnz = noisy.apply(&g).unwrap();
        let mut diff = fnz.clone();
        diff.scale_add(-1.0, &fc);
        let pert = diff.norm(&lat, &grid);
        let gn = g.norm(&lat, &grid);
        assert!(pert > 0.0, "noise had no effect");
        assert!(pert <= eps * gn * (1.0 + 1e-9), "perturbation {pert} exceeds eps*|g| {}", eps * gn);
    }

    #[test]
    fn matrix_roundtrip() {
        let grid = Grid::new(2, [0.0, 0.0], 8, 8, 0.125, Grid::uniform_times(0.0, 0.2, 4)).unwrap();
        let lat = BoundaryLattice::build(&grid);
        let basis = DtnBasis::nodal(&lat, &grid, 16, 2);
        let m = assemble_dtn(None, &mat(), &grid, basis).unwrap();
        let dir = std::env::temp_dir().join("parprobe_dtn_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dtn.bin");
        m.write_matrix(&path).unwrap();
        let (rows, cols, vals) = read_matrix(&path).unwrap();
        assert_eq!(rows, grid.times.len() * lat.len());
        assert_eq!(cols, m.columns.as_ref().unwrap().len());
        assert_eq!(vals.len(), rows * cols);
        // spot check one entry
        let col0 = &m.columns.as_ref().unwrap()[0];
        assert_eq!(vals[0 * cols], col0.values[0][0]);
        std::fs::remove_file(&path).unwrap();
    }
}
