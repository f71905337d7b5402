//! Probe geometry: the boundary point O maximizing the modified distance,
//! the exterior normal there, and the probe points ȳ = O + λ₁hν,
//! y₁ = O + λ₃hν at times t̄ and t₁ = t̄ − λ₂h².

use super::inclusion::{
    boundary_normal, exterior_component, modified_distance, Domain, InclusionFamily, Side,
};
use super::set::dist_to_points;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SeparationChecks {
    /// min over t ∈ [t₁, t̄] of dist(ȳ, D_first(t)).
    pub dist_ybar_first: f64,
    /// min over t ∈ [t₁, t̄] of dist(y₁, D_first(t)).
    pub dist_y1_first: f64,
    /// min over t, z ∈ {ȳ, y₁} of dist(z, D_second(t)).
    pub dist_second: f64,
    /// dist ≥ ½·min{λ}·h for both probe points against the first family.
    pub near_separation_ok: bool,
    /// dist ≥ ρ/2 against the second family.
    pub far_separation_ok: bool,
    /// both probe points lie in the boundary-connected component 𝒢(t̄).
    pub probes_visible: bool,
}

impl SeparationChecks {
    pub fn all_ok(&self) -> bool {
        self.near_separation_ok && self.far_separation_ok && self.probes_visible
    }
}

/// Probe configuration for the gap-functional experiments.
#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    /// The maximizing boundary point O.
    pub base_point: [f64; 2],
    /// Exterior unit normal ν(O, t̄) pointing toward 𝒢(t̄).
    pub normal: [f64; 2],
    pub t_bar: f64,
    pub h: f64,
    pub lambda: [f64; 3],
    pub t1: f64,
    pub y_bar: [f64; 2],
    pub y1: [f64; 2],
    /// min{d_μ(t̄), ρ₀}.
    pub rho: f64,
    pub delta: f64,
    /// d_μ(t̄) the probe was built from.
    pub d_mu: f64,
    /// True when the maximizer lies on ∂D₂, i.e. the families were relabeled
    /// so that the probed boundary plays the first role.
    pub swapped: bool,
    pub separations: SeparationChecks,
}

impl ProbeConfig {
    /// Assemble a probe from explicit geometry, without the modified-distance
    /// search or separation checks (used for exterior-point evaluations and
    /// synthetic configurations).
    pub fn from_geometry(o: [f64; 2], normal: [f64; 2], t_bar: f64, h: f64, lambda: [f64; 3]) -> Self {
        ProbeConfig {
            base_point: o,
            normal,
            t_bar,
            h,
            lambda,
            t1: t_bar - lambda[1] * h * h,
            y_bar: [o[0] + lambda[0] * h * normal[0], o[1] + lambda[0] * h * normal[1]],
            y1: [o[0] + lambda[2] * h * normal[0], o[1] + lambda[2] * h * normal[1]],
            rho: h,
            delta: 1.0,
            d_mu: f64::NAN,
            swapped: false,
            separations: SeparationChecks {
                dist_ybar_first: f64::INFINITY,
                dist_y1_first: f64::INFINITY,
                dist_second: f64::INFINITY,
                near_separation_ok: true,
                far_separation_ok: true,
                probes_visible: true,
            },
        }
    }
}

/// Build the probe geometry for the pair (D₁, D₂) at time t̄ and scale h.
///
/// Errors when h violates the admissibility bound h ≤ δ·min{ρ, √t̄} (the
/// message carries the admissible bound) or when t₁ ≤ 0. Separation bounds
/// are checked by dense time sampling and reported, not enforced.
#[allow(clippy::too_many_arguments)]
pub fn make_probe(
    d1: &InclusionFamily,
    d2: &InclusionFamily,
    t_bar: f64,
    h: f64,
    lambda: [f64; 3],
    dom: &Domain,
    rho0: f64,
    delta: f64,
    resolution: f64,
) -> Result<ProbeConfig> {
    for (i, l) in lambda.iter().enumerate() {
        if !(*l > 0.0 && *l <= 1.0) {
            return Err(Error::Precondition(format!("lambda{} must lie in (0, 1], got {l}", i + 1)));
        }
    }
    if !(t_bar > 0.0) {
        return Err(Error::Precondition(format!("t_bar must be positive, got {t_bar}")));
    }
    let md = modified_distance(d1, d2, t_bar, dom, resolution)?;
    let rho = md.value.min(rho0);
    let h_max = delta * rho.min(t_bar.sqrt());
    if !(h > 0.0 && h <= h_max + 1e-12) {
        return Err(Error::Precondition(format!(
            "h = {h} violates the admissibility bound h <= delta*min(rho, sqrt(t_bar)) = {h_max:.6}"
        )));
    }
    let t1 = t_bar - lambda[1] * h * h;
    if t1 <= 0.0 {
        return Err(Error::Precondition(format!("t1 = {t1} must be positive")));
    }
    let swapped = md.side == Side::Second;
    let (first, second) = if swapped { (d2, d1) } else { (d1, d2) };
    let normal = boundary_normal(first, md.maximizer, t_bar, dom, resolution)?;
    let o = md.maximizer;
    let y_bar = [o[0] + lambda[0] * h * normal[0], o[1] + lambda[0] * h * normal[1]];
    let y1 = [o[0] + lambda[2] * h * normal[0], o[1] + lambda[2] * h * normal[1]];

    // dense time sampling of the separation bounds over [t1, t_bar]
    let samples = 9usize;
    let mut dist_ybar_first = f64::INFINITY;
    let mut dist_y1_first = f64::INFINITY;
    let mut dist_second = f64::INFINITY;
    for i in 0..samples {
        let t = t1 + (t_bar - t1) * i as f64 / (samples - 1) as f64;
        let sf = first.time_slice(t, dom, resolution)?;
        let ss = second.time_slice(t, dom, resolution)?;
        let dist_fam = |z: [f64; 2], fam: &InclusionFamily, bd: &[[f64; 2]]| -> f64 {
            if fam.indicator(z, t) {
                0.0
            } else {
                dist_to_points(z, bd)
            }
        };
        dist_ybar_first = dist_ybar_first.min(dist_fam(y_bar, first, &sf.boundary_points));
        dist_y1_first = dist_y1_first.min(dist_fam(y1, first, &sf.boundary_points));
        dist_second = dist_second
            .min(dist_fam(y_bar, second, &ss.boundary_points))
            .min(dist_fam(y1, second, &ss.boundary_points));
    }
    let near_floor = 0.5 * lambda.iter().copied().fold(f64::INFINITY, f64::min) * h;
    let tol = 1.5 * resolution;
    let view = exterior_component(&[d1, d2], t_bar, dom, resolution)?;
    let separations = SeparationChecks {
        dist_ybar_first,
        dist_y1_first,
        dist_second,
        near_separation_ok: dist_ybar_first >= near_floor - tol && dist_y1_first >= near_floor - tol,
        far_separation_ok: dist_second >= 0.5 * rho - tol,
        probes_visible: view.is_visible(y_bar) && view.is_visible(y1),
    };

    Ok(ProbeConfig {
        base_point: o,
        normal,
        t_bar,
        h,
        lambda,
        t1,
        y_bar,
        y1,
        rho,
        delta,
        d_mu: md.value,
        swapped,
        separations,
    })
}

/// Shrink δ (and with it the largest admissible h) until the separation
/// checks pass; mirrors the "δ small enough" logic constructively.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_delta(
    d1: &InclusionFamily,
    d2: &InclusionFamily,
    t_bar: f64,
    lambda: [f64; 3],
    dom: &Domain,
    rho0: f64,
    resolution: f64,
    delta_start: f64,
) -> Result<(f64, ProbeConfig)> {
    let mut delta = delta_start;
    for _ in 0..12 {
        let md = modified_distance(d1, d2, t_bar, dom, resolution)?;
        let h = 0.99 * delta * md.value.min(rho0).min(t_bar.sqrt());
        if h < 4.0 * resolution {
            return Err(Error::Precondition(format!(
                "delta sweep reached h = {h:.5} below grid resolution before separations passed"
            )));
        }
        let probe = make_probe(d1, d2, t_bar, h, lambda, dom, rho0, delta, resolution)?;
        if probe.separations.all_ok() {
            return Ok((delta, probe));
        }
        delta *= 0.7;
    }
    Err(Error::Precondition("delta sweep exhausted without passing separation checks".into()))
}
