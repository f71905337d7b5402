//! Time-varying inclusion families D(t) ⊂ Ω: the space-time indicator χ_Q,
//! per-time sampled slices, the boundary-connected exterior component 𝒢(t),
//! the modified distance d_μ, and exterior boundary normals.

use super::set::{dist_to_points, edt, SampledSet};
use super::shapes::Shape;
use crate::{Error, Result};

/// The conductor Ω, desk scale: an axis-aligned box (an interval for n = 1).
#[derive(Clone, Copy, Debug)]
pub struct Domain {
    pub n: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Domain {
    pub fn new_1d(a: f64, b: f64) -> Domain {
        Domain { n: 1, lo: [a, 0.0], hi: [b, 0.0] }
    }

    pub fn new_2d(lo: [f64; 2], hi: [f64; 2]) -> Domain {
        Domain { n: 2, lo, hi }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let mut inside = x[0] > self.lo[0] && x[0] < self.hi[0];
        if self.n == 2 {
            inside = inside && x[1] > self.lo[1] && x[1] < self.hi[1];
        }
        inside
    }

    /// Distance from an interior point to ∂Ω (0 outside).
    pub fn boundary_distance(&self, x: [f64; 2]) -> f64 {
        if !self.contains(x) {
            return 0.0;
        }
        let mut d = (x[0] - self.lo[0]).min(self.hi[0] - x[0]);
        if self.n == 2 {
            d = d.min(x[1] - self.lo[1]).min(self.hi[1] - x[1]);
        }
        d
    }

    pub fn diameter(&self) -> f64 {
        if self.n == 1 {
            self.hi[0] - self.lo[0]
        } else {
            (self.hi[0] - self.lo[0]).hypot(self.hi[1] - self.lo[1])
        }
    }

    pub fn measure(&self) -> f64 {
        if self.n == 1 {
            self.hi[0] - self.lo[0]
        } else {
            (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])
        }
    }
}

/// A-priori geometric data: the scale ρ₀, the regularity constant E, the
/// measure bound |Ω| ≤ M·ρ₀ⁿ, and the dimension.
#[derive(Clone, Copy, Debug)]
pub struct GeometryConfig {
    pub rho0: f64,
    pub regularity: f64,
    pub measure_bound: f64,
    pub n: usize,
}

impl GeometryConfig {
    pub fn new(rho0: f64, regularity: f64, measure_bound: f64, n: usize) -> Result<Self> {
        if !(rho0 > 0.0 && regularity > 0.0 && measure_bound > 0.0) {
            return Err(Error::Precondition(
                "geometry constants rho0, E, M must be positive".into(),
            ));
        }
        if n != 1 && n != 2 {
            return Err(Error::Precondition(format!("dimension must be 1 or 2, got {n}")));
        }
        Ok(GeometryConfig { rho0, regularity, measure_bound, n })
    }
}

/// Raster-backed family: indicator bytes on a space-time lattice.
#[derive(Clone, Debug)]
pub struct RasterFamily {
    pub n: usize,
    pub origin: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    pub t_end: f64,
    pub steps: usize,
    /// slice-major (time outer), row-major within a slice
    pub indicator: Vec<u8>,
}

impl RasterFamily {
    pub fn slice_index(&self, t: f64) -> usize {
        if self.steps <= 1 {
            return 0;
        }
        let pos = (t / self.t_end).clamp(0.0, 1.0) * (self.steps - 1) as f64;
        pos.round() as usize
    }

    pub fn contains(&self, x: [f64; 2], t: f64) -> bool {
        let s = self.slice_index(t);
        let ix = ((x[0] - self.origin[0]) / self.spacing).floor();
        let iy = if self.n == 2 { ((x[1] - self.origin[1]) / self.spacing).floor() } else { 0.0 };
        if ix < 0.0 || iy < 0.0 {
            return false;
        }
        let (ix, iy) = (ix as usize, iy as usize);
        if ix >= self.nx || iy >= self.ny {
            return false;
        }
        self.indicator[s * self.nx * self.ny + ix + self.nx * iy] != 0
    }
}

/// Time-varying inclusion: union of analytic shapes or a raster indicator.
#[derive(Clone, Debug)]
pub struct InclusionFamily {
    pub n: usize,
    pub shapes: Vec<Shape>,
    pub raster: Option<RasterFamily>,
}

impl InclusionFamily {
    pub fn from_shapes(n: usize, shapes: Vec<Shape>) -> Self {
        InclusionFamily { n, shapes, raster: None }
    }

    pub fn from_raster(raster: RasterFamily) -> Self {
        InclusionFamily { n: raster.n, shapes: vec![], raster: Some(raster) }
    }

    /// Parse a semicolon-separated shape recipe, e.g.
    /// `"disk cx=0.5 cy=0.5 r=0.2; disk cx=0.2 cy=0.3 r=0.1"`.
    pub fn parse_recipe(n: usize, recipe: &str) -> Result<Self> {
        let mut shapes = Vec::new();
        for part in recipe.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            shapes.push(Shape::parse(part)?);
        }
        if shapes.is_empty() {
            return Err(Error::Config("inclusion recipe has no shapes".into()));
        }
        Ok(InclusionFamily::from_shapes(n, shapes))
    }

    /// χ_Q(x, t).
    pub fn indicator(&self, x: [f64; 2], t: f64) -> bool {
        if let Some(r) = &self.raster {
            return r.contains(x, t);
        }
        self.shapes.iter().any(|s| s.contains(x, t))
    }

    /// Union level function (positive inside); None for raster families.
    pub fn level(&self, x: [f64; 2], t: f64) -> Option<f64> {
        if self.raster.is_some() {
            return None;
        }
        self.shapes
            .iter()
            .map(|s| s.level(x, t))
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// Sampled set for the slice D(t): interior points on a grid of the given
    /// resolution, boundary points by zero-crossing interpolation (analytic
    /// level) or cell-edge midpoints (raster).
    pub fn time_slice(&self, t: f64, dom: &Domain, resolution: f64) -> Result<SampledSet> {
        let nx = (((dom.hi[0] - dom.lo[0]) / resolution).ceil() as usize).max(2);
        let ny = if self.n == 2 {
            (((dom.hi[1] - dom.lo[1]) / resolution).ceil() as usize).max(2)
        } else {
            1
        };
        let hx = (dom.hi[0] - dom.lo[0]) / nx as f64;
        let hy = if self.n == 2 { (dom.hi[1] - dom.lo[1]) / ny as f64 } else { 1.0 };
        let center = |ix: usize, iy: usize| {
            [dom.lo[0] + (ix as f64 + 0.5) * hx, if self.n == 2 { dom.lo[1] + (iy as f64 + 0.5) * hy } else { 0.0 }]
        };

        let mut inside = vec![false; nx * ny];
        let mut lev = vec![0.0f64; nx * ny];
        let analytic = self.raster.is_none();
        for iy in 0..ny {
            for ix in 0..nx {
                let x = center(ix, iy);
                if analytic {
                    let l = self.level(x, t).unwrap();
                    lev[ix + nx * iy] = l;
                    inside[ix + nx * iy] = l > 0.0;
                } else {
                    inside[ix + nx * iy] = self.indicator(x, t);
                    lev[ix + nx * iy] = if inside[ix + nx * iy] { 0.5 } else { -0.5 };
                }
            }
        }

        let mut points = Vec::new();
        let mut boundary = Vec::new();
        for iy in 0..ny {
            for ix in 0..nx {
                let i = ix + nx * iy;
                if inside[i] {
                    points.push(center(ix, iy));
                }
                // zero crossings along +x and +y edges
                if ix + 1 < nx {
                    let j = i + 1;
                    if (lev[i] > 0.0) != (lev[j] > 0.0) {
                        let frac = lev[i] / (lev[i] - lev[j]);
                        let a = center(ix, iy);
                        boundary.push([a[0] + frac * hx, a[1]]);
                    }
                }
                if self.n == 2 && iy + 1 < ny {
                    let j = i + nx;
                    if (lev[i] > 0.0) != (lev[j] > 0.0) {
                        let frac = lev[i] / (lev[i] - lev[j]);
                        let a = center(ix, iy);
                        boundary.push([a[0], a[1] + frac * hy]);
                    }
                }
            }
        }
        if points.is_empty() || boundary.is_empty() {
            return Err(Error::EmptySet("inclusion slice is empty at this time"));
        }
        SampledSet::new(points, boundary, hx.max(hy.min(1.0)))
    }

    /// Check dist(D(t), ∂Ω) ≥ ρ₀ and connectivity of Ω∖D̄(t) over sampled
    /// times; used by the DtN and probe pipelines.
    pub fn validate(&self, dom: &Domain, rho0: f64, t_end: f64, resolution: f64) -> Result<()> {
        for i in 0..=8 {
            let t = t_end * i as f64 / 8.0;
            let slice = self.time_slice(t, dom, resolution)?;
            for p in &slice.points {
                let d = dom.boundary_distance(*p);
                if d < rho0 - resolution {
                    return Err(Error::Precondition(format!(
                        "dist(D(t), boundary) = {d:.4} < rho0 = {rho0} at t = {t}"
                    )));
                }
            }
            exterior_component(&[self], t, dom, resolution)?;
        }
        Ok(())
    }
}

/// Grid view of the exterior component 𝒢(t) of Ω ∖ ∪ D̄_j(t) that touches
/// ∂Ω, plus the covered region Ω_D(t) = Ω ∖ 𝒢(t).
pub struct ExteriorView {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub lo: [f64; 2],
    pub n: usize,
    /// cells in 𝒢(t)
    pub visible: Vec<bool>,
    /// cells covered by some inclusion
    pub covered: Vec<bool>,
}

impl ExteriorView {
    pub fn center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [
            self.lo[0] + (ix as f64 + 0.5) * self.hx,
            if self.n == 2 { self.lo[1] + (iy as f64 + 0.5) * self.hy } else { 0.0 },
        ]
    }

    pub fn cell_of(&self, x: [f64; 2]) -> Option<(usize, usize)> {
        let ix = ((x[0] - self.lo[0]) / self.hx).floor();
        let iy = if self.n == 2 { ((x[1] - self.lo[1]) / self.hy).floor() } else { 0.0 };
        if ix < 0.0 || iy < 0.0 || ix as usize >= self.nx || iy as usize >= self.ny {
            None
        } else {
            Some((ix as usize, iy as usize))
        }
    }

    pub fn is_visible(&self, x: [f64; 2]) -> bool {
        self.cell_of(x).is_some_and(|(ix, iy)| self.visible[ix + self.nx * iy])
    }
}

/// Flood fill of 𝒢(t) from the cells adjacent to ∂Ω. Errors if the view of
/// Ω ∖ ∪D̄_j(t) has no boundary-adjacent free cell.
pub fn exterior_component(
    families: &[&InclusionFamily],
    t: f64,
    dom: &Domain,
    resolution: f64,
) -> Result<ExteriorView> {
    let n = dom.n;
    let nx = (((dom.hi[0] - dom.lo[0]) / resolution).ceil() as usize).max(2);
    let ny = if n == 2 { (((dom.hi[1] - dom.lo[1]) / resolution).ceil() as usize).max(2) } else { 1 };
    let hx = (dom.hi[0] - dom.lo[0]) / nx as f64;
    let hy = if n == 2 { (dom.hi[1] - dom.lo[1]) / ny as f64 } else { 1.0 };
    let mut covered = vec![false; nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let x = [
                dom.lo[0] + (ix as f64 + 0.5) * hx,
                if n == 2 { dom.lo[1] + (iy as f64 + 0.5) * hy } else { 0.0 },
            ];
            covered[ix + nx * iy] = families.iter().any(|f| f.indicator(x, t));
        }
    }
    let mut visible = vec![false; nx * ny];
    let mut queue = std::collections::VecDeque::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let i = ix + nx * iy;
            let on_edge = ix == 0 || ix == nx - 1 || (n == 2 && (iy == 0 || iy == ny - 1));
            if on_edge && !covered[i] {
                visible[i] = true;
                queue.push_back((ix, iy));
            }
        }
    }
    if queue.is_empty() {
        return Err(Error::Precondition(
            "no free cell adjacent to the outer boundary: inclusions reach the boundary".into(),
        ));
    }
    while let Some((ix, iy)) = queue.pop_front() {
        let push = |jx: usize, jy: usize, visible: &mut Vec<bool>, queue: &mut std::collections::VecDeque<(usize, usize)>| {
            let j = jx + nx * jy;
            if !visible[j] && !covered[j] {
                visible[j] = true;
                queue.push_back((jx, jy));
            }
        };
        if ix > 0 {
            push(ix - 1, iy, &mut visible, &mut queue);
        }
        if ix + 1 < nx {
            push(ix + 1, iy, &mut visible, &mut queue);
        }
        if n == 2 {
            if iy > 0 {
                push(ix, iy - 1, &mut visible, &mut queue);
            }
            if iy + 1 < ny {
                push(ix, iy + 1, &mut visible, &mut queue);
            }
        }
    }
    Ok(ExteriorView { nx, ny, hx, hy, lo: dom.lo, n, visible, covered })
}

/// Which family a boundary point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub struct ModifiedDistance {
    pub value: f64,
    /// Maximizing boundary point O and the family whose boundary carries it.
    pub maximizer: [f64; 2],
    pub side: Side,
}

/// The modified distance d_μ(t): the larger of the two one-sided sups of
/// dist(x, D_other(t)) over boundary points x visible from the exterior
/// component 𝒢(t). Ties in the maximizer are broken lexicographically.
pub fn modified_distance(
    d1: &InclusionFamily,
    d2: &InclusionFamily,
    t: f64,
    dom: &Domain,
    resolution: f64,
) -> Result<ModifiedDistance> {
    // connectivity requirement on each family separately
    for (fam, name) in [(d1, "D1"), (d2, "D2")] {
        let solo = exterior_component(&[fam], t, dom, resolution)?;
        let reachable: usize = solo.visible.iter().filter(|&&v| v).count();
        let free: usize = solo.covered.iter().filter(|&&c| !c).count();
        if reachable + reachable / 50 < free {
            return Err(Error::Precondition(format!(
                "Omega minus {name}(t) is disconnected at t = {t} (={reachable} of {free} cells reachable)"
            )));
        }
    }

    let view = exterior_component(&[d1, d2], t, dom, resolution)?;
    let s1 = d1.time_slice(t, dom, resolution)?;
    let s2 = d2.time_slice(t, dom, resolution)?;

    let visible_filter = |pts: &[[f64; 2]]| -> Vec<[f64; 2]> {
        pts.iter()
            .copied()
            .filter(|&p| {
                // a boundary sample is on ∂Ω_D(t) if a nearby cell lies in 𝒢(t)
                let offsets = [
                    [0.0, 0.0],
                    [resolution, 0.0],
                    [-resolution, 0.0],
                    [0.0, resolution],
                    [0.0, -resolution],
                ];
                offsets.iter().any(|o| view.is_visible([p[0] + o[0], p[1] + o[1]]))
            })
            .collect()
    };

    let dist_to_family = |x: [f64; 2], fam: &InclusionFamily, slice: &SampledSet| -> f64 {
        if fam.indicator(x, t) {
            return 0.0;
        }
        dist_to_points(x, &slice.boundary_points)
    };

    let mut best = ModifiedDistance { value: -1.0, maximizer: [0.0, 0.0], side: Side::First };
    for (pts, other, other_slice, side) in [
        (visible_filter(&s1.boundary_points), d2, &s2, Side::First),
        (visible_filter(&s2.boundary_points), d1, &s1, Side::Second),
    ] {
        for p in pts {
            let d = dist_to_family(p, other, other_slice);
            let better = d > best.value + 1e-15
                || ((d - best.value).abs() <= 1e-15
                    && (p[0], p[1]) < (best.maximizer[0], best.maximizer[1]));
            if better {
                best = ModifiedDistance { value: d, maximizer: p, side };
            }
        }
    }
    if best.value < 0.0 {
        return Err(Error::EmptySet("no visible boundary points for modified distance"));
    }
    Ok(best)
}

/// Exterior unit normal of ∂D(t) at P, oriented toward the boundary-connected
/// component. Errors if P is not on the boundary at grid tolerance.
pub fn boundary_normal(
    fam: &InclusionFamily,
    p: [f64; 2],
    t: f64,
    dom: &Domain,
    resolution: f64,
) -> Result<[f64; 2]> {
    if fam.n == 1 {
        // boundary points are the two interval ends
        let slice = fam.time_slice(t, dom, resolution)?;
        let d = dist_to_points(p, &slice.boundary_points);
        if d > 2.0 * resolution {
            return Err(Error::Precondition(format!("point is {d:.4} from the boundary")));
        }
        let inside_right = fam.indicator([p[0] + 2.0 * resolution, 0.0], t);
        return Ok(if inside_right { [-1.0, 0.0] } else { [1.0, 0.0] });
    }

    let normal = if let Some(_lev) = fam.level(p, t) {
        if fam.level(p, t).unwrap().abs() > 2.0 * resolution {
            return Err(Error::Precondition(format!(
                "point is not on the boundary (level = {:.4})",
                fam.level(p, t).unwrap()
            )));
        }
        // gradient of the level function, resolution-free
        let h = 1e-6 * dom.diameter();
        let gx = (fam.level([p[0] + h, p[1]], t).unwrap() - fam.level([p[0] - h, p[1]], t).unwrap())
            / (2.0 * h);
        let gy = (fam.level([p[0], p[1] + h], t).unwrap() - fam.level([p[0], p[1] - h], t).unwrap())
            / (2.0 * h);
        let norm = gx.hypot(gy);
        if norm < 1e-12 {
            return Err(Error::Precondition("degenerate level gradient at boundary point".into()));
        }
        // level increases inward; the exterior normal is the negative gradient
        [-gx / norm, -gy / norm]
    } else {
        // raster family: principal direction of nearby boundary samples
        let slice = fam.time_slice(t, dom, resolution)?;
        let near: Vec<[f64; 2]> = slice
            .boundary_points
            .iter()
            .copied()
            .filter(|b| (b[0] - p[0]).hypot(b[1] - p[1]) < 6.0 * resolution)
            .collect();
        if near.len() < 3 {
            return Err(Error::Precondition("too few boundary samples near the point".into()));
        }
        let mean = near.iter().fold([0.0, 0.0], |a, b| [a[0] + b[0], a[1] + b[1]]);
        let mean = [mean[0] / near.len() as f64, mean[1] / near.len() as f64];
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for b in &near {
            sxx += (b[0] - mean[0]) * (b[0] - mean[0]);
            sxy += (b[0] - mean[0]) * (b[1] - mean[1]);
            syy += (b[1] - mean[1]) * (b[1] - mean[1]);
        }
        // smaller-eigenvalue direction of the scatter matrix
        let tr = sxx + syy;
        let det = sxx * syy - sxy * sxy;
        let lam = 0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt();
        let v = if sxy.abs() > 1e-14 { [lam - syy, sxy] } else { [1.0, 0.0] };
        let norm = v[0].hypot(v[1]);
        let mut nvec = [v[0] / norm, v[1] / norm];
        if fam.indicator([p[0] + 2.0 * resolution * nvec[0], p[1] + 2.0 * resolution * nvec[1]], t) {
            nvec = [-nvec[0], -nvec[1]];
        }
        nvec
    };

    // orient toward the component touching ∂Ω
    let view = exterior_component(&[fam], t, dom, resolution)?;
    let step = 3.0 * resolution;
    let fwd = [p[0] + step * normal[0], p[1] + step * normal[1]];
    let bwd = [p[0] - step * normal[0], p[1] - step * normal[1]];
    if view.is_visible(fwd) {
        Ok(normal)
    } else if view.is_visible(bwd) {
        Ok([-normal[0], -normal[1]])
    } else {
        Ok(normal)
    }
}

/// Covered-region distance: dist(x, Ω_D(t)) on the exterior grid, used by
/// probe admissibility checks.
pub fn covered_distance_field(view: &ExteriorView, spacing: f64) -> Vec<f64> {
    edt(&view.covered, view.nx, view.ny, spacing)
}
