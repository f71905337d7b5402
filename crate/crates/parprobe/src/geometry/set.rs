//! Sampled closed sets, Hausdorff distance, and the ε-operations
//! [A]_ε (dilation), (A)_ε (erosion), [∂A]_ε (boundary band).
//!
//! Everything is sample-based: a set is carried as dense point samples plus
//! boundary samples, and the ε-operations re-rasterize through an exact
//! Euclidean distance transform. Errors are bounded by the stated resolution.

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SampledSet {
    /// Dense samples of the closed set (interior and boundary).
    pub points: Vec<[f64; 2]>,
    /// Samples of the set's boundary.
    pub boundary_points: Vec<[f64; 2]>,
    /// Maximum gap between adjacent samples.
    pub resolution: f64,
}

impl SampledSet {
    pub fn new(points: Vec<[f64; 2]>, boundary_points: Vec<[f64; 2]>, resolution: f64) -> Result<Self> {
        if points.is_empty() || boundary_points.is_empty() {
            return Err(Error::EmptySet("sampled set requires points and boundary points"));
        }
        if !(resolution > 0.0) {
            return Err(Error::Precondition(format!("resolution must be positive, got {resolution}")));
        }
        Ok(SampledSet { points, boundary_points, resolution })
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    /// Membership test at sample resolution.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        dist_to_points(x, &self.points) <= 0.75 * self.resolution
    }
}

pub fn dist_to_points(x: [f64; 2], pts: &[[f64; 2]]) -> f64 {
    let mut best = f64::INFINITY;
    for p in pts {
        let d2 = (x[0] - p[0]) * (x[0] - p[0]) + (x[1] - p[1]) * (x[1] - p[1]);
        if d2 < best {
            best = d2;
        }
    }
    best.sqrt()
}

/// Hausdorff distance between the sampled sets:
/// max(sup_{a∈A} dist(a,B), sup_{b∈B} dist(b,A)). The error is bounded by
/// the coarser of the two sample resolutions.
pub fn hausdorff_distance(a: &SampledSet, b: &SampledSet) -> Result<f64> {
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptySet("hausdorff_distance"));
    }
    let mut sup_ab = 0.0_f64;
    for p in &a.points {
        sup_ab = sup_ab.max(dist_to_points(*p, &b.points));
    }
    let mut sup_ba = 0.0_f64;
    for p in &b.points {
        sup_ba = sup_ba.max(dist_to_points(*p, &a.points));
    }
    Ok(sup_ab.max(sup_ba))
}

/// One-sided sup_{a∈A} dist(a, B) over point samples.
pub fn directed_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let mut sup = 0.0_f64;
    for p in a {
        sup = sup.max(dist_to_points(*p, b));
    }
    sup
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsMode {
    Dilate,
    Erode,
    BoundaryBand,
}

/// [A]_ε, (A)_ε, or [∂A]_ε of a sampled set. Erosion may empty the set,
/// which is reported as `None` rather than an error.
pub fn dilate_erode(a: &SampledSet, eps: f64, mode: EpsMode) -> Result<Option<SampledSet>> {
    if eps < 0.0 {
        return Err(Error::Precondition(format!("eps must be nonnegative, got {eps}")));
    }
    let res = a.resolution;
    let (lo, hi) = a.bounding_box();
    let pad = eps + 2.0 * res;
    let spacing = res.min(if eps > 0.0 { eps / 4.0 } else { res });
    // anchor the scratch grid so lattice-aligned input samples land at cell
    // centers, not corners (corner jitter makes the seeding erratic)
    let pad_cells = (pad / spacing).ceil() + 1.0;
    let nx = (((hi[0] - lo[0]) / spacing).ceil() + 2.0 * pad_cells) as usize + 2;
    let ny = (((hi[1] - lo[1]) / spacing).ceil() + 2.0 * pad_cells) as usize + 2;
    let ox = lo[0] - (pad_cells - 0.5) * spacing;
    let oy = lo[1] - (pad_cells - 0.5) * spacing;
    let center = |ix: usize, iy: usize| [ox + (ix as f64 + 0.5) * spacing, oy + (iy as f64 + 0.5) * spacing];

    // seed masks from point samples
    let mut in_a = vec![false; nx * ny];
    for p in &a.points {
        let ix = ((p[0] - ox) / spacing) as usize;
        let iy = ((p[1] - oy) / spacing) as usize;
        if ix < nx && iy < ny {
            in_a[ix + nx * iy] = true;
        }
    }
    let mut on_b = vec![false; nx * ny];
    for p in &a.boundary_points {
        let ix = ((p[0] - ox) / spacing) as usize;
        let iy = ((p[1] - oy) / spacing) as usize;
        if ix < nx && iy < ny {
            on_b[ix + nx * iy] = true;
        }
    }
    let dist_a = edt(&in_a, nx, ny, spacing);
    let dist_b = edt(&on_b, nx, ny, spacing);

    // membership of the original set at cell resolution: within a sample gap
    // of some point sample (raw seeding leaves pinholes when samples land on
    // cell boundaries)
    let keep: Vec<bool> = (0..nx * ny)
        .map(|i| match mode {
            EpsMode::Dilate => dist_a[i] <= eps,
            EpsMode::Erode => dist_a[i] <= 0.9 * res && dist_b[i] > eps,
            EpsMode::BoundaryBand => dist_b[i] <= eps,
        })
        .collect();

    if !keep.iter().any(|&k| k) {
        return Ok(None);
    }

    // boundary of the result: kept cells with a non-kept 4-neighbor
    let mut points = Vec::new();
    let mut boundary = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            if !keep[ix + nx * iy] {
                continue;
            }
            points.push(center(ix, iy));
            let edge = ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1;
            let exposed = edge
                || !keep[ix - 1 + nx * iy]
                || !keep[ix + 1 + nx * iy]
                || !keep[ix + nx * (iy - 1)]
                || !keep[ix + nx * (iy + 1)];
            if exposed {
                boundary.push(center(ix, iy));
            }
        }
    }
    if boundary.is_empty() {
        boundary = points.clone();
    }
    Ok(Some(SampledSet { points, boundary_points: boundary, resolution: spacing }))
}

/// Exact Euclidean distance transform (Felzenszwalb–Huttenlocher), distances
/// to the nearest seed cell center, in physical units.
pub fn edt(seed: &[bool], nx: usize, ny: usize, spacing: f64) -> Vec<f64> {
    const INF: f64 = 1e20;
    let mut f = vec![INF; nx * ny];
    for i in 0..nx * ny {
        if seed[i] {
            f[i] = 0.0;
        }
    }
    // columns then rows, squared distances in cell units
    let mut tmp = vec![0.0; ny.max(nx)];
    for ix in 0..nx {
        for iy in 0..ny {
            tmp[iy] = f[ix + nx * iy];
        }
        let col = dt_1d(&tmp[..ny]);
        for iy in 0..ny {
            f[ix + nx * iy] = col[iy];
        }
    }
    for iy in 0..ny {
        for ix in 0..nx {
            tmp[ix] = f[ix + nx * iy];
        }
        let row = dt_1d(&tmp[..nx]);
        for ix in 0..nx {
            f[ix + nx * iy] = row[ix];
        }
    }
    f.iter().map(|&d| d.sqrt() * spacing).collect()
}

/// 1-D squared distance transform: d[i] = min_j (i−j)² + f[j].
fn dt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut d = vec![0.0f64; n];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * q as f64 - 2.0 * p as f64);
            if s <= z[k] {
                if k == 0 {
                    break;
                }
                k -= 1;
            } else {
                break;
            }
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(cx: f64, cy: f64, r: f64, res: f64) -> SampledSet {
        let mut points = Vec::new();
        let n = (2.0 * r / res).ceil() as i64 + 1;
        for iy in -n..=n {
            for ix in -n..=n {
                let x = cx + ix as f64 * res;
                let y = cy + iy as f64 * res;
                if (x - cx).hypot(y - cy) <= r {
                    points.push([x, y]);
                }
            }
        }
        let m = (2.0 * std::f64::consts::PI * r / res).ceil() as usize;
        let boundary = (0..m)
            .map(|i| {
                let th = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                [cx + r * th.cos(), cy + r * th.sin()]
            })
            .collect();
        SampledSet::new(points, boundary, res).unwrap()
    }

    #[test]
    fn hausdorff_identity() {
        let a = disk(0.0, 0.0, 1.0, 0.05);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_translated_disks() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let b = disk(0.35, 0.0, 1.0, 0.02);
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 0.35).abs() < 0.03, "d = {d}");
    }

    #[test]
    fn hausdorff_concentric_disks() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let b = disk(0.0, 0.0, 1.5, 0.02);
        let d = hausdorff_distance(&a, &b).unwrap();
        assert!((d - 0.5).abs() < 0.03, "d = {d}");
    }

    #[test]
    fn dilate_disk_grows_radius() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let grown = dilate_erode(&a, 0.5, EpsMode::Dilate).unwrap().unwrap();
        let target = disk(0.0, 0.0, 1.5, 0.02);
        let d = hausdorff_distance(&grown, &target).unwrap();
        assert!(d < 0.05, "dilated disk off by {d}");
    }

    #[test]
    fn dilate_identity_at_zero() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let same = dilate_erode(&a, 0.0, EpsMode::Dilate).unwrap().unwrap();
        let d = hausdorff_distance(&a, &same).unwrap();
        assert!(d < 0.04, "eps = 0 dilation moved the set by {d}");
    }

    #[test]
    fn erode_disk_to_empty() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        assert!(dilate_erode(&a, 1.0, EpsMode::Erode).unwrap().is_none());
    }

    #[test]
    fn erode_partially() {
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let shrunk = dilate_erode(&a, 0.4, EpsMode::Erode).unwrap().unwrap();
        let target = disk(0.0, 0.0, 0.6, 0.02);
        let d = hausdorff_distance(&shrunk, &target).unwrap();
        assert!(d < 0.05, "eroded disk off by {d}");
    }

    #[test]
    fn band_equals_dilation_minus_erosion() {
        // [A]_ε ∖ (A)_ε = [∂A]_ε, checked cellwise away from the band edges
        let a = disk(0.0, 0.0, 1.0, 0.02);
        let eps = 0.3;
        let dil = dilate_erode(&a, eps, EpsMode::Dilate).unwrap().unwrap();
        let ero = dilate_erode(&a, eps, EpsMode::Erode).unwrap().unwrap();
        let band = dilate_erode(&a, eps, EpsMode::BoundaryBand).unwrap().unwrap();
        let mut checked = 0;
        for i in 0..900 {
            let th = i as f64;
            let r = 1.6 * (i as f64 / 900.0);
            let x = [r * th.cos(), r * th.sin()];
            // skip points within resolution of either band edge
            if ((x[0].hypot(x[1]) - 1.0).abs() - eps).abs() < 0.06 {
                continue;
            }
            let lhs = dil.contains(x) && !ero.contains(x);
            let rhs = band.contains(x);
            assert_eq!(lhs, rhs, "mismatch at {x:?}");
            checked += 1;
        }
        assert!(checked > 500);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(SampledSet::new(vec![], vec![[0.0, 0.0]], 0.1).is_err());
    }

    #[test]
    fn edt_exactness_on_point_seed() {
        let nx = 41;
        let ny = 41;
        let mut seed = vec![false; nx * ny];
        seed[20 + nx * 20] = true;
        let d = edt(&seed, nx, ny, 0.5);
        for iy in 0..ny {
            for ix in 0..nx {
                let expect = 0.5 * (((ix as f64 - 20.0).powi(2) + (iy as f64 - 20.0).powi(2)).sqrt());
                assert!((d[ix + nx * iy] - expect).abs() < 1e-12);
            }
        }
    }
}
