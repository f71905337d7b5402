//! Experiment orchestration: load a config, run the requested pipeline,
//! write CSVs and the JSON report, return the pass/fail ledger.

pub mod config;
pub mod plot;
pub mod report;

pub use config::{ExperimentConfig, Pipeline};
pub use plot::emit_plotdata;
pub use report::{fmt_float, write_csv, ExperimentReport, LedgerEntry};

use crate::analysis;
use crate::geometry::{self, hausdorff_distance, modified_distance, InclusionFamily, ProbeConfig};
use crate::kernels::spectral::QuadParams;
use crate::kernels::{gamma_plus, Material};
use crate::probe::{
    blowup_sweep, calibrate_lambdas, detect_boundary, ih_integral,
    DetectionOutcome, GapEvaluator, IhParams, SweepParams,
};
use crate::probe::functional::WindowParams;
use crate::rng::Rng;
use crate::solver::{
    solve_forward, BoundaryData, BoundaryLattice, DiscreteDtN, Grid, NoiseOverlay, Scheme,
};
use crate::{Error, Result};
use std::time::Instant;

/// Execute the configured pipeline; write outputs under `cfg.out_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport {
        id: cfg.id.clone(),
        pipeline: cfg.pipeline.name().to_string(),
        seed: cfg.seed,
        config_echo: cfg.raw.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        ..Default::default()
    };
    std::fs::create_dir_all(&cfg.out_dir)?;
    match cfg.pipeline {
        Pipeline::KernelScaling => kernel_scaling(cfg, &mut rep)?,
        Pipeline::KernelTransmission => kernel_transmission(cfg, &mut rep)?,
        Pipeline::VerifyFr => verify_fr(cfg, &mut rep)?,
        Pipeline::ProbeIdentity => probe_identity(cfg, &mut rep)?,
        Pipeline::ProbeSweep => probe_sweep(cfg, &mut rep)?,
        Pipeline::GeometrySuite => geometry_suite(cfg, &mut rep)?,
        Pipeline::VerifyCylinder => verify_cylinder(cfg, &mut rep)?,
        Pipeline::VerifyInterp => verify_interp(cfg, &mut rep)?,
        Pipeline::VerifyFax => verify_fax(cfg, &mut rep)?,
        Pipeline::VerifyAsymptotic => verify_asymptotic(cfg, &mut rep)?,
        Pipeline::SolverConvergence => solver_convergence(cfg, &mut rep)?,
        Pipeline::Calibrate => calibrate(cfg, &mut rep)?,
        Pipeline::Solve => solve_pipeline(cfg, &mut rep)?,
        Pipeline::Dtn => dtn_pipeline(cfg, &mut rep)?,
        Pipeline::Detect => detect_pipeline(cfg, &mut rep)?,
    }
    rep.wall_seconds = start.elapsed().as_secs_f64();
    rep.write(&cfg.out_dir)?;
    Ok(rep)
}

fn record_csv(rep: &mut ExperimentReport, cfg: &ExperimentConfig, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let path = cfg.out_dir.join(name);
    let hash = write_csv(&path, header, rows)?;
    rep.csv_files.push((path, hash));
    Ok(())
}

/// I(h)·hⁿ/I(1) ∈ [1−tol, 1+tol] for h ∈ {1/4, 1/2, 2, 4}, both the
/// configured contrast and its reciprocal.
fn kernel_scaling(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let lambda = cfg.lambda.unwrap_or([0.5, 0.25, 0.4]);
    let tol = cfg.tolerance("scaling_band", 1e-3);
    let params = IhParams {
        tol_rel: cfg.tolerance("quadrature_rel", 1.5e-4),
        base_nodes: cfg.tolerance("base_nodes", 18.0) as usize,
    };
    let n = cfg.n;
    let mut rows = Vec::new();
    for &k in &[cfg.material.k(), 1.0 / cfg.material.k()] {
        let mat = Material::new(k)?;
        let (i1, e1) = ih_integral(1.0, lambda, &mat, n, params)?;
        for &h in &[0.25, 0.5, 2.0, 4.0] {
            let (ih, eh) = ih_integral(h, lambda, &mat, n, params)?;
            let ratio = ih * h.powi(n as i32) / i1;
            rows.push(vec![k, h, ih, ratio, eh, e1]);
            rep.check(
                &format!("scaling ratio at k={k}, h={h}"),
                ratio,
                &format!("[{}, {}]", 1.0 - tol, 1.0 + tol),
                (ratio - 1.0).abs() <= tol,
            );
        }
        rep.record_fit(&format!("I1_k_{k}"), i1);
    }
    record_csv(rep, cfg, "kernel_scaling.csv", &["k", "h", "I_h", "ratio", "err_h", "err_1"], &rows)
}

/// Transmission conditions of the flat-interface kernel at sampled (x′, t),
/// plus unit mass.
fn kernel_transmission(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let mat = cfg.material;
    let qp = QuadParams { tol_rel: 1e-10, max_panels: 6000 };
    let tol = cfg.tolerance("jump_rel", 1e-4);
    let y = [0.0, -0.3];
    let eps = 1e-7;
    let mut rng = Rng::seed_from(cfg.seed);
    let mut rows = Vec::new();
    let mut worst_value = 0.0f64;
    let mut worst_flux = 0.0f64;
    for _ in 0..20 {
        let dx = rng.range(-0.6, 0.6);
        let t = rng.range(0.05, 0.5);
        let up = gamma_plus([dx, eps], t, y, 0.0, &mat, 2, qp)?;
        let lo = gamma_plus([dx, -eps], t, y, 0.0, &mat, 2, qp)?;
        let vrel = (up.value - lo.value).abs() / up.value.abs().max(1e-300);
        let frel = (mat.k() * up.gradient[1] - lo.gradient[1]).abs()
            / lo.gradient[1].abs().max(1e-12);
        worst_value = worst_value.max(vrel);
        worst_flux = worst_flux.max(frel);
        rows.push(vec![dx, t, vrel, frel]);
    }
    rep.check("value jump (worst of 20)", worst_value, &format!("< {tol}"), worst_value < tol);
    rep.check("flux jump (worst of 20)", worst_flux, &format!("< {tol}"), worst_flux < tol);

    // mass by planar tensor quadrature of the kernel over its essential
    // support; the Gaussian tail beyond the box stays under 1e-4. The kernel
    // is even in x′ (the source sits on the axis), so one half suffices.
    let t_mass = 0.25;
    let qp_mass = QuadParams { tol_rel: 1e-6, max_panels: 1200 };
    let kmax = mat.k().max(1.0);
    let reach = (4.0 * kmax * t_mass * 11.5f64.max((1.0f64).ln())).sqrt() + 0.3;
    let mut mass = 0.0;
    let (xps, wps) = crate::quad::gauss_legendre_on(26, 0.0, reach);
    for sign in [-1.0f64, 1.0] {
        let (xns, wns) = crate::quad::gauss_legendre_on(32, 0.0, reach);
        for (xn, wn) in xns.iter().zip(&wns) {
            let xn_signed = sign * xn;
            let mut line = 0.0;
            for (xp, wp) in xps.iter().zip(&wps) {
                line += 2.0 * wp * gamma_plus([*xp, xn_signed], t_mass, y, 0.0, &mat, 2, qp_mass)?.value;
            }
            mass += wn * line;
        }
    }
    let band = cfg.tolerance("mass_band", 1e-3);
    rep.check("kernel mass", mass, &format!("[{}, {}]", 1.0 - band, 1.0 + band), (mass - 1.0).abs() <= band);
    rows.push(vec![0.0, t_mass, mass, 0.0]);
    record_csv(rep, cfg, "transmission.csv", &["x_prime", "t", "value_jump_rel", "flux_jump_rel"], &rows)?;

    // kernel point sweep with envelope comparison
    let mut sweep_rows = Vec::new();
    let mut c_env = 1.0f64;
    let mut evals = Vec::new();
    for it in 1..=3 {
        let t = 0.1 * it as f64;
        for ix in -2..=2 {
            for iy in 0..=3 {
                let x = [0.25 * ix as f64, -0.25 + 0.25 * iy as f64];
                let e = gamma_plus(x, t, y, 0.0, &mat, 2, qp)?;
                evals.push((x, t, e));
            }
        }
    }
    for &(x, t, ref e) in &evals {
        while e.value
            > crate::kernels::gaussian_envelope(x, t, y, 0.0, 2, c_env, crate::kernels::EnvelopeKind::Value)
        {
            c_env *= 1.05;
        }
    }
    for (x, t, e) in &evals {
        let env = crate::kernels::gaussian_envelope(*x, *t, y, 0.0, 2, c_env, crate::kernels::EnvelopeKind::Value);
        sweep_rows.push(vec![
            x[0], x[1], *t, y[0], y[1], 0.0, e.value, e.gradient[0], e.gradient[1], env, e.quad_error,
        ]);
    }
    rep.record_fit("fitted_envelope_constant", c_env);
    record_csv(
        rep,
        cfg,
        "kernel_sweep.csv",
        &["x0", "x1", "t", "y0", "y1", "s", "value", "grad0", "grad1", "envelope", "quadrature_error"],
        &sweep_rows,
    )
}

/// Ratio constancy of the Gaussian convolution identity across randomized
/// point sets for the three exponent pairs.
fn verify_fr(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let mut rng = Rng::seed_from(cfg.seed);
    let tol = cfg.tolerance("ratio_spread", 1e-3);
    let mut rows = Vec::new();
    for &(alpha, beta) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 0.25)] {
        let p = analysis::FrParams::new(alpha, beta, 1.0, cfg.n)?;
        let pairs: Vec<_> = (0..10)
            .map(|_| {
                let x = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
                let y = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
                let s = rng.range(0.0, 0.3);
                let t = s + rng.range(0.2, 1.5);
                (x, y, s, t)
            })
            .collect();
        let ratios: Vec<f64> = pairs
            .iter()
            .map(|&(x, y, s, t)| analysis::fr::identity_ratio(&p, x, y, s, t))
            .collect();
        let (mean, std) = crate::fit::mean_std(&ratios);
        let spread = std / mean.abs().max(1e-300);
        for (i, r) in ratios.iter().enumerate() {
            rows.push(vec![alpha, beta, i as f64, *r]);
        }
        let analytic = p.analytic_constant();
        rep.record_fit(&format!("ratio_a{alpha}_b{beta}"), mean);
        rep.check(
            &format!("ratio spread (alpha={alpha}, beta={beta})"),
            spread,
            &format!("< {tol}"),
            spread < tol,
        );
        rep.check(
            &format!("ratio vs Beta-function constant (alpha={alpha}, beta={beta})"),
            (mean - analytic).abs() / analytic,
            "< 1e-3",
            (mean - analytic).abs() / analytic < 1e-3,
        );
    }
    record_csv(rep, cfg, "fr_ratios.csv", &["alpha", "beta", "pair", "ratio"], &rows)
}

/// Pairing identity: 𝒰 from the DtN route against S₁ − S₂ at exterior
/// probe points on the two-inclusion family. Both routes read the same
/// kernel pair (the identity holds exactly for box-truncated kernels, so a
/// shared pair isolates the solver-vs-quadrature content of the check).
fn probe_identity(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    use crate::solver::fundamental::collar_grid;
    use crate::solver::{discrete_fundamental, KernelDirection};
    let (d1, d2) = cfg.require_inclusions()?;
    let dom = cfg.domain;
    let mat = cfg.material;
    let lambda = cfg.lambda.unwrap_or([0.5, 0.25, 0.4]);
    // exterior probe anchored below the bottom edge midpoint
    let base = [0.5 * (dom.lo[0] + dom.hi[0]), dom.lo[1]];
    let h = cfg.tolerance("probe_h", 1.1);
    let mut probe = ProbeConfig::from_geometry(base, [0.0, -1.0], cfg.t_bar, h, lambda);
    // snap t1 onto the uniform DtN lattice
    let times = Grid::uniform_times(0.0, cfg.t_bar, cfg.grid_steps);
    probe.t1 = *times
        .iter()
        .min_by(|a, b| (*a - probe.t1).abs().partial_cmp(&(*b - probe.t1).abs()).unwrap())
        .unwrap();

    // one shared kernel pair on a pole-refined superset of the DtN lattice
    let window = probe.t_bar - probe.t1;
    let mut ktimes: Vec<f64> = times.iter().copied().filter(|&t| t >= probe.t1 - 1e-12).collect();
    let dt_min = window / 512.0;
    let mut extra = dt_min;
    while extra < window / cfg.grid_steps as f64 {
        ktimes.push(probe.t1 + extra);
        ktimes.push(probe.t_bar - extra);
        extra *= 1.6;
    }
    ktimes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ktimes.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let margin = lambda[0] * h + 0.2;
    let kgrid = collar_grid(&dom, cfg.rho0, margin, cfg.kernel_spacing, ktimes)?;
    let gamma2 =
        discrete_fundamental(probe.y1, probe.t1, Some(d2), &mat, &kgrid, KernelDirection::Forward)?;
    let gamma1_star = discrete_fundamental(
        probe.y_bar,
        probe.t_bar,
        Some(d1),
        &mat,
        &kgrid,
        KernelDirection::Adjoint,
    )?;
    let eval = GapEvaluator::from_fields(&probe, d1, d2, &mat, gamma2, gamma1_star);
    let s1 = eval.volume_functional(1);
    let s2 = eval.volume_functional(2);
    let u_volume = s1.value - s2.value;

    // DtN route on the pinned lattice, fed the same kernel traces
    let spacing = (dom.hi[0] - dom.lo[0]) / cfg.grid_cells as f64;
    let ny = if cfg.n == 2 { ((dom.hi[1] - dom.lo[1]) / spacing).round() as usize } else { 1 };
    let grid = Grid::new(cfg.n, dom.lo, cfg.grid_cells, ny, spacing, times)?;
    let dtn1 = DiscreteDtN::new(grid.clone(), mat, Some(d1.clone()), Scheme::CrankNicolson);
    let dtn2 = DiscreteDtN::new(grid.clone(), mat, Some(d2.clone()), Scheme::CrankNicolson);
    let lattice = BoundaryLattice::build(&grid);
    let g = eval.gamma2().trace(&lattice, &grid);
    let phi = eval.gamma1_star().trace(&lattice, &grid);
    let flux1 = dtn1.apply(&g)?;
    let flux2 = dtn2.apply(&g)?;
    let mut diff = flux1;
    diff.scale_add(-1.0, &flux2);
    let u_dtn = diff.pair(&phi, &lattice, &grid) / (mat.k() - 1.0);
    let dt_max = window / cfg.grid_steps as f64;
    let dtn_err = u_dtn.abs()
        * (4.0 * (spacing / cfg.rho0).powi(2) + 4.0 * (cfg.kernel_spacing / cfg.rho0).powi(2)
            + 0.5 * dt_max / window);

    let combined_err = s1.estimated_error + s2.estimated_error + dtn_err;
    let tol_rel = cfg.tolerance("identity_rel", 0.05);
    let gap = (u_dtn - u_volume).abs();
    let allowed = (tol_rel * u_volume.abs()).max(combined_err);
    rep.record_fit("u_volume", u_volume);
    rep.record_fit("u_dtn", u_dtn);
    rep.record_fit("combined_error", combined_err);
    rep.check(
        "pairing identity |u_dtn - (S1 - S2)|",
        gap,
        &format!("<= max({tol_rel}·|U|, combined err) = {allowed:.3e}"),
        gap <= allowed,
    );
    record_csv(
        rep,
        cfg,
        "identity.csv",
        &["u_volume", "u_dtn", "s1", "s2", "abs_gap", "allowed"],
        &[vec![u_volume, u_dtn, s1.value, s2.value, gap, allowed]],
    )
}

/// Blow-up sweep: fitted slope of log|𝒰| against log h.
fn probe_sweep(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let (d1, d2) = cfg.require_inclusions()?;
    if cfg.h_list.is_empty() {
        // an empty sweep is a valid no-op experiment
        rep.check("sweep points evaluated", 0.0, "empty sweep list", true);
        return record_csv(
            rep,
            cfg,
            "blowup_sweep.csv",
            &["t_bar", "h", "u_volume", "u_dtn_exterior", "s1", "s2", "u_err"],
            &[],
        );
    }
    let lambda = match cfg.lambda {
        Some(l) => l,
        None => calibrate_lambdas(&cfg.material, cfg.n)?.0,
    };
    if cfg.h_list.len() < 2 {
        return Err(Error::Config("probe-sweep needs sweep.h with at least two values".into()));
    }
    let params = SweepParams {
        window: WindowParams {
            spacing: cfg.window_spacing,
            dt_min_frac: 1.0 / 48.0,
            dt_max_frac: 1.0 / 16.0,
            dt_ratio: 1.3,
            margin: 0.1,
        },
        rho0: cfg.rho0,
        delta: cfg.delta,
        geometry_resolution: cfg.kernel_spacing.min(1.0 / 256.0),
        with_dtn_exterior: cfg.tolerance("with_dtn_exterior", 0.0) > 0.5,
        dtn_cells: cfg.grid_cells,
    };
    let t_bars = if cfg.t_bar_list.is_empty() { vec![cfg.t_bar] } else { cfg.t_bar_list.clone() };
    let n = cfg.n as f64;
    let band = cfg.tolerance("slope_band", 0.3);
    let r2_floor = cfg.tolerance("r_squared", 0.98);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for &t_bar in &t_bars {
        let sweep =
            blowup_sweep(d1, d2, t_bar, lambda, &cfg.material, &cfg.domain, &params, &cfg.h_list)?;
        for p in &sweep.points {
            rows.push(vec![
                t_bar,
                p.h,
                p.u_volume,
                p.u_dtn_exterior.unwrap_or(f64::NAN),
                p.s1,
                p.s2,
                p.u_volume_err,
            ]);
        }
        let tag = if t_bars.len() > 1 { format!(" (t_bar={t_bar})") } else { String::new() };
        rep.record_fit(&format!("fitted_slope{tag}"), sweep.fitted_slope);
        rep.record_fit(&format!("r_squared{tag}"), sweep.r_squared);
        rep.check(
            &format!("blow-up exponent{tag}"),
            sweep.fitted_slope,
            &format!("[{}, {}]", -n - band, -n + band),
            sweep.fitted_slope >= -n - band && sweep.fitted_slope <= -n + band,
        );
        rep.check(
            &format!("power-law fit R²{tag}"),
            sweep.r_squared,
            &format!(">= {r2_floor}"),
            sweep.r_squared >= r2_floor,
        );
    }
    record_csv(
        rep,
        cfg,
        "blowup_sweep.csv",
        &["t_bar", "h", "u_volume", "u_dtn_exterior", "s1", "s2", "u_err"],
        &rows,
    )
}

/// Randomized smooth shape pairs: d_μ ≤ d_H(closures) and bounded fitted
/// equivalence ratios.
fn geometry_suite(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let mut rng = Rng::seed_from(cfg.seed);
    let dom = cfg.domain;
    let res = cfg.tolerance("resolution", 1.0 / 192.0);
    let members = cfg.suite_size;
    let mut rows = Vec::new();
    let mut ratio32_max = 0.0f64;
    let mut ratio33_max = 0.0f64;
    let mut dmu_bound_ok = true;
    for i in 0..members {
        let cx = rng.range(0.45, 0.55);
        let cy = rng.range(0.45, 0.55);
        let r0 = rng.range(0.17, 0.24);
        let m1 = rng.range(0.0, 0.06);
        let m2 = rng.range(0.0, 0.05);
        let base = format!("star cx={cx} cy={cy} r0={r0} m2={m1:.4} m3={m2:.4}");
        let dr = rng.range(0.01, 0.05);
        let shift = rng.range(-0.02, 0.02);
        let pert = format!(
            "star cx={} cy={cy} r0={} m2={m1:.4} m3={m2:.4}",
            cx + shift,
            r0 + dr
        );
        let d1 = InclusionFamily::parse_recipe(2, &base)?;
        let d2 = InclusionFamily::parse_recipe(2, &pert)?;
        let md = modified_distance(&d1, &d2, 0.0, &dom, res)?;
        let s1 = d1.time_slice(0.0, &dom, res)?;
        let s2 = d2.time_slice(0.0, &dom, res)?;
        let dh_closure = hausdorff_distance(&s1, &s2)?;
        let dh_boundary = geometry::set::directed_hausdorff(&s1.boundary_points, &s2.boundary_points)
            .max(geometry::set::directed_hausdorff(&s2.boundary_points, &s1.boundary_points));
        if md.value > dh_closure + 3.0 * res {
            dmu_bound_ok = false;
        }
        let floor = 3.0 * res;
        let r32 = dh_boundary / md.value.max(floor);
        let r33 = dh_closure / dh_boundary.max(floor);
        ratio32_max = ratio32_max.max(r32);
        ratio33_max = ratio33_max.max(r33);
        rows.push(vec![i as f64, md.value, dh_closure, dh_boundary, r32, r33]);
    }
    let cap = cfg.tolerance("ratio_cap", 10.0);
    rep.record_fit("ratio_boundary_over_dmu_max", ratio32_max);
    rep.record_fit("ratio_closure_over_boundary_max", ratio33_max);
    rep.check("d_mu <= d_H(closures) on every pair", 1.0, "always", dmu_bound_ok);
    rep.check("fitted boundary/d_mu ratio", ratio32_max, &format!("<= {cap}"), ratio32_max <= cap);
    rep.check("fitted closure/boundary ratio", ratio33_max, &format!("<= {cap}"), ratio33_max <= cap);
    record_csv(
        rep,
        cfg,
        "geometry_suite.csv",
        &["pair", "d_mu", "d_H_closures", "d_H_boundaries", "ratio32", "ratio33"],
        &rows,
    )
}

/// Two-sphere one-cylinder harness with one global constant.
fn verify_cylinder(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let big_r = 1.0;
    let (r1, r2) = (0.08, 0.2);
    let eta1 = cfg.tolerance("eta1", 0.25);
    let suite = analysis::caloric_suite(cfg.suite_size, big_r, cfg.seed);
    let mut c_global = 1.0f64;
    for u in &suite {
        let n = analysis::cylinder::norms(u, r1, r2, big_r);
        let c = analysis::cylinder::fit_constant(&n, r1, r2, big_r)
            .ok_or_else(|| Error::Precondition("no admissible constant for a suite member".into()))?;
        c_global = c_global.max(c);
    }
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (i, u) in suite.iter().enumerate() {
        let r = analysis::check_two_sphere_one_cylinder(u, r1, r2, big_r, c_global * (1.0 + 1e-9), eta1)?;
        all_pass &= r.passes();
        rows.push(vec![i as f64, r.lhs, r.rhs, r.slack]);
    }
    rep.record_fit("global_constant", c_global);
    rep.check("two-sphere one-cylinder slack >= 0 (all members)", c_global, "single fitted C", all_pass);
    rep.check("fitted constant finite", c_global, "< 1e6", c_global < 1e6);
    record_csv(rep, cfg, "cylinder_suite.csv", &["member", "lhs", "rhs", "slack"], &rows)
}

/// Interpolation inequality with one global constant across the suite.
fn verify_interp(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let mut rng = Rng::seed_from(cfg.seed);
    let r = 1.0;
    let mut members: Vec<Vec<(f64, [f64; 2], f64)>> = vec![vec![]];
    for _ in 0..cfg.suite_size.max(3) {
        members.push(
            (0..3)
                .map(|_| {
                    (
                        rng.range(-2.0, 2.0),
                        [rng.range(-0.8, 0.8), rng.range(-0.8, 0.8)],
                        rng.range(0.15, 0.7),
                    )
                })
                .collect(),
        );
    }
    let eval = |terms: &[(f64, [f64; 2], f64)], x: [f64; 2]| -> f64 {
        if terms.is_empty() {
            return 1.5;
        }
        terms
            .iter()
            .map(|(w, c, s)| w * (-((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (s * s)).exp())
            .sum()
    };
    let grad = |terms: &[(f64, [f64; 2], f64)], x: [f64; 2]| -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for (w, c, s) in terms {
            let e = (-((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (s * s)).exp();
            g[0] += w * e * (-2.0 * (x[0] - c[0]) / (s * s));
            g[1] += w * e * (-2.0 * (x[1] - c[1]) / (s * s));
        }
        g
    };
    let mut c_global = 0.0f64;
    for terms in &members {
        let r0 = analysis::check_interpolation(&|x| eval(terms, x), &|x| grad(terms, x), r, 2, 1.0, "fit")?;
        c_global = c_global.max(r0.fitted_constant);
    }
    let mut rows = Vec::new();
    let mut all = true;
    for (i, terms) in members.iter().enumerate() {
        let rr = analysis::check_interpolation(
            &|x| eval(terms, x),
            &|x| grad(terms, x),
            r,
            2,
            c_global * (1.0 + 1e-12),
            "member",
        )?;
        all &= rr.passes();
        rows.push(vec![i as f64, rr.lhs, rr.rhs, rr.slack]);
    }
    rep.record_fit("global_constant", c_global);
    rep.check("interpolation inequality with one constant", c_global, "slack >= 0", all);
    record_csv(rep, cfg, "interpolation_suite.csv", &["member", "lhs", "rhs", "slack"], &rows)
}

/// Parabolic-cylinder L² bound for the two-phase kernel.
fn verify_fax(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let inc = cfg
        .inclusion_d1
        .clone()
        .unwrap_or(InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.2")?);
    let delta1 = cfg.tolerance("delta1", 0.25);
    let cases = [
        (([0.35, 0.5], 0.0), ([0.62, 0.5], 0.08)),
        (([0.45, 0.5], 0.0), ([0.5, 0.52], 0.004)),
        (([0.3, 0.45], 0.0), ([0.7, 0.55], 0.05)),
    ];
    let mut c_shared = 1.0f64;
    for (pole, cyl) in cases {
        let r = analysis::check_prop_fax(
            &inc,
            &cfg.material,
            pole,
            cyl,
            delta1,
            &cfg.domain,
            cfg.kernel_spacing,
            None,
        )?;
        c_shared = c_shared.max(r.fitted_constant);
    }
    let mut rows = Vec::new();
    let mut all = true;
    for (i, (pole, cyl)) in cases.iter().enumerate() {
        let r = analysis::check_prop_fax(
            &inc,
            &cfg.material,
            *pole,
            *cyl,
            delta1,
            &cfg.domain,
            cfg.kernel_spacing,
            Some(c_shared * (1.0 + 1e-9)),
        )?;
        all &= r.passes();
        rows.push(vec![i as f64, r.lhs, r.rhs, r.slack]);
    }
    rep.record_fit("global_constant", c_shared);
    rep.check("cylinder L2 bound with one constant", c_shared, "slack >= 0", all);
    record_csv(rep, cfg, "fax_cases.csv", &["case", "lhs", "rhs", "slack"], &rows)
}

/// Curved-vs-flat kernel ladder: log-log slope of the value difference.
fn verify_asymptotic(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let scales: Vec<f64> = if cfg.h_list.is_empty() {
        (0..8).map(|i| 0.26 * 0.78f64.powi(i)).collect()
    } else {
        cfg.h_list.clone()
    };
    let amp = cfg.tolerance("chart_amp", 0.1);
    let cells = cfg.tolerance("cells_per_scale", 12.0) as usize;
    let ladder = analysis::check_asymptotic_estimate(amp, 1.0, &cfg.material, &scales, cells)?;
    let rows: Vec<Vec<f64>> = ladder
        .rungs
        .iter()
        .map(|r| vec![r.scale, r.parabolic_distance, r.value_diff, r.gradient_diff, r.control_diff])
        .collect();
    let floor = cfg.tolerance("slope_floor", 0.8);
    rep.record_fit("value_slope", ladder.value_slope);
    rep.record_fit("gradient_slope", ladder.gradient_slope);
    rep.record_fit("fitted_beta", ladder.fitted_beta);
    rep.check(
        "asymptotic value slope",
        ladder.value_slope,
        &format!(">= {floor}"),
        ladder.value_slope >= floor,
    );
    record_csv(
        rep,
        cfg,
        "asymptotic_ladder.csv",
        &["scale", "parabolic_distance", "value_diff", "gradient_diff", "control_diff"],
        &rows,
    )
}

/// Spatial convergence order on the homogeneous square oracle plus the exact
/// 1-D two-phase steady state.
fn solver_convergence(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    // series oracle for the unit square driven by a ramped constant
    let ramp = 0.1;
    let series = |x: f64, y: f64, t: f64| -> f64 {
        let mut u = (t / ramp).min(1.0);
        for j in (1..24).step_by(2) {
            for l in (1..24).step_by(2) {
                let bj = 4.0 / (j as f64 * std::f64::consts::PI);
                let bl = 4.0 / (l as f64 * std::f64::consts::PI);
                let mu = ((j * j + l * l) as f64) * std::f64::consts::PI * std::f64::consts::PI;
                let t1 = t.min(ramp);
                let integral = ((-mu * (t - t1)).exp() - (-mu * t).exp()) / mu;
                u -= bj * bl * (j as f64 * std::f64::consts::PI * x).sin()
                    * (l as f64 * std::f64::consts::PI * y).sin()
                    * integral
                    / ramp;
            }
        }
        u
    };
    let t_end = 0.2;
    let mut errs = Vec::new();
    let sizes = [24usize, 48, 96];
    for &nx in &sizes {
        let steps = (nx * nx) / 3;
        let grid = Grid::new(2, [0.0, 0.0], nx, nx, 1.0 / nx as f64, Grid::uniform_times(0.0, t_end, steps))?;
        let lat = BoundaryLattice::build(&grid);
        let g = BoundaryData::from_fn(&lat, &grid, |_, t| (t / ramp).min(1.0));
        let sol = solve_forward(&g, None, &cfg.material, &grid, Scheme::CrankNicolson)?;
        let last = sol.field.last().unwrap();
        let mut err2 = 0.0;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let c = grid.cell_center(ix, iy);
                let diff = last[ix + grid.nx * iy] - series(c[0], c[1], t_end);
                err2 += diff * diff * grid.spacing * grid.spacing;
            }
        }
        errs.push(err2.sqrt());
    }
    let order1 = (errs[0] / errs[1]).log2();
    let order2 = (errs[1] / errs[2]).log2();
    let floor = cfg.tolerance("order_floor", 1.8);
    rep.record_fit("order_level1", order1);
    rep.record_fit("order_level2", order2);
    rep.check("spatial order (coarse pair)", order1, &format!(">= {floor}"), order1 >= floor);
    rep.check("spatial order (fine pair)", order2, &format!(">= {floor}"), order2 >= floor);

    // exact 1-D two-phase steady state via the stationary solve
    let nx = 40;
    let grid = Grid::new(1, [0.0, 0.0], nx, 1, 1.0 / nx as f64, Grid::uniform_times(0.0, 1.0, 2))?;
    let lat = BoundaryLattice::build(&grid);
    let inc = InclusionFamily::parse_recipe(1, "segment s1=0.5 s2=1.5")?;
    let k = cfg.material.k();
    let g_last: Vec<f64> = lat.faces.iter().map(|f| if f.pos[0] > 0.5 { 1.0 } else { 0.0 }).collect();
    let steady = crate::solver::forward::solve_steady(&g_last, Some(&inc), &cfg.material, &grid, 0.0)?;
    let q = 2.0 * k / (k + 1.0);
    let mut worst = 0.0f64;
    for ix in 0..nx {
        let x = grid.cell_center(ix, 0)[0];
        let exact = if x < 0.5 { q * x } else { 0.5 * q + q / k * (x - 0.5) };
        worst = worst.max((steady[ix] - exact).abs());
    }
    let steady_tol = cfg.tolerance("steady_tol", 1e-12);
    rep.record_fit("steady_state_worst_error", worst);
    rep.check("1-D two-phase steady state", worst, &format!("<= {steady_tol}"), worst <= steady_tol);
    record_csv(
        rep,
        cfg,
        "convergence.csv",
        &["nx", "l2_error"],
        &sizes.iter().zip(&errs).map(|(&n, &e)| vec![n as f64, e]).collect::<Vec<_>>(),
    )
}

/// λ calibration for the configured contrast (both recorded per k).
fn calibrate(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    for &k in &[cfg.material.k(), 1.0 / cfg.material.k()] {
        let mat = Material::new(k)?;
        let (lam, i1) = calibrate_lambdas(&mat, cfg.n)?;
        rep.record_fit(&format!("lambda1_k_{k}"), lam[0]);
        rep.record_fit(&format!("lambda2_k_{k}"), lam[1]);
        rep.record_fit(&format!("lambda3_k_{k}"), lam[2]);
        rep.record_fit(&format!("I1_k_{k}"), i1);
        rep.check(&format!("calibration significance (k={k})"), i1, "> 0", i1 > 0.0);
    }
    Ok(())
}

/// Plain forward solve with a named boundary recipe; writes the final field
/// snapshot and the flux CSV.
fn solve_pipeline(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let dom = cfg.domain;
    let spacing = (dom.hi[0] - dom.lo[0]) / cfg.grid_cells as f64;
    let ny = if cfg.n == 2 { ((dom.hi[1] - dom.lo[1]) / spacing).round() as usize } else { 1 };
    let grid = Grid::new(
        cfg.n,
        dom.lo,
        cfg.grid_cells,
        ny,
        spacing,
        Grid::uniform_times(0.0, cfg.t_bar, cfg.grid_steps),
    )?;
    let lat = BoundaryLattice::build(&grid);
    let recipe = cfg.raw.get("boundary.recipe").map(|s| s.as_str()).unwrap_or("ramp");
    let g = match recipe {
        "ramp" => BoundaryData::from_fn(&lat, &grid, |_, t| (t / (0.2 * cfg.t_bar)).min(1.0)),
        "ramp-x" => BoundaryData::from_fn(&lat, &grid, |x, t| (t / (0.2 * cfg.t_bar)).min(1.0) * x[0]),
        "bump" => {
            let t_end = cfg.t_bar;
            BoundaryData::from_fn(&lat, &grid, move |_, t| {
                (std::f64::consts::PI * t / t_end).sin().powi(2)
            })
        }
        other => return Err(Error::Config(format!("unknown boundary.recipe '{other}'"))),
    };
    let sol = solve_forward(&g, cfg.inclusion_d1.as_ref(), &cfg.material, &grid, Scheme::ImplicitEuler)?;
    let field_path = cfg.out_dir.join("final_field.bin");
    crate::geometry::gridfile::write_field(
        &field_path,
        sol.field.last().unwrap(),
        grid.nx,
        grid.ny,
        grid.spacing,
        grid.origin,
        *grid.times.last().unwrap(),
    )?;
    rep.csv_files.push((field_path.clone(), report::hash_file(&field_path)?));
    let rows: Vec<Vec<f64>> = grid
        .times
        .iter()
        .enumerate()
        .flat_map(|(m, &t)| {
            let flux = &sol.flux.values[m];
            lat.faces
                .iter()
                .enumerate()
                .map(move |(f, face)| vec![t, face.pos[0], face.pos[1], flux[f]])
                .collect::<Vec<_>>()
        })
        .collect();
    rep.record_fit("cg_iterations", sol.cg_iterations as f64);
    rep.check("forward solve completed", sol.cg_iterations as f64, "finite", true);
    record_csv(rep, cfg, "flux.csv", &["t", "x", "y", "flux"], &rows)
}

/// Assemble the DtN map over a strided nodal basis, write the binary matrix
/// and the operator norm.
fn dtn_pipeline(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let dom = cfg.domain;
    let spacing = (dom.hi[0] - dom.lo[0]) / cfg.grid_cells as f64;
    let ny = if cfg.n == 2 { ((dom.hi[1] - dom.lo[1]) / spacing).round() as usize } else { 1 };
    let grid = Grid::new(
        cfg.n,
        dom.lo,
        cfg.grid_cells,
        ny,
        spacing,
        Grid::uniform_times(0.0, cfg.t_bar, cfg.grid_steps),
    )?;
    let lat = BoundaryLattice::build(&grid);
    let stride_s = (lat.len() / 24).max(1);
    let stride_t = (grid.times.len() / 8).max(1);
    let basis = crate::solver::DtnBasis::nodal(&lat, &grid, stride_s, stride_t);
    let mut map = DiscreteDtN::new(grid, cfg.material, cfg.inclusion_d1.clone(), Scheme::ImplicitEuler);
    if let Some(&eps) = cfg.noise_eps.first() {
        if eps > 0.0 {
            map = map.with_noise(NoiseOverlay { eps, rank: 16, seed: cfg.seed });
        }
    }
    map.assemble(basis)?;
    let norm = map.operator_norm()?;
    let path = cfg.out_dir.join("dtn_matrix.bin");
    map.write_matrix(&path)?;
    rep.csv_files.push((path.clone(), report::hash_file(&path)?));
    rep.record_fit("operator_norm", norm);
    rep.check("DtN assembled", norm, "> 0", norm > 0.0);
    Ok(())
}

/// Detection experiment with optional noise sweep.
fn detect_pipeline(cfg: &ExperimentConfig, rep: &mut ExperimentReport) -> Result<()> {
    let (d1, d2) = cfg.require_inclusions()?;
    let dom = cfg.domain;
    let spacing = (dom.hi[0] - dom.lo[0]) / cfg.grid_cells as f64;
    let ny = if cfg.n == 2 { ((dom.hi[1] - dom.lo[1]) / spacing).round() as usize } else { 1 };
    let grid = Grid::new(
        cfg.n,
        dom.lo,
        cfg.grid_cells,
        ny,
        spacing,
        Grid::uniform_times(0.0, cfg.t_bar, cfg.grid_steps),
    )?;
    let dirs: Vec<[f64; 2]> = (0..cfg.directions)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / cfg.directions as f64;
            [th.cos(), th.sin()]
        })
        .collect();
    let truth = modified_distance(d1, d2, cfg.t_bar, &dom, spacing.min(1.0 / 192.0))?;
    let mut noise_rows = Vec::new();
    let mut eps_list = cfg.noise_eps.clone();
    if eps_list.is_empty() {
        eps_list.push(0.0);
    }
    let mut profile_rows = Vec::new();
    for (ei, &eps) in eps_list.iter().enumerate() {
        let mk = |fam: &InclusionFamily, salt: u64| {
            let m = DiscreteDtN::new(grid.clone(), cfg.material, Some(fam.clone()), Scheme::ImplicitEuler);
            if eps > 0.0 {
                m.with_noise(NoiseOverlay { eps, rank: 16, seed: cfg.seed ^ salt })
            } else {
                m
            }
        };
        let dtn1 = mk(d1, 0x5eed_0001);
        let dtn2 = mk(d2, 0x5eed_0002);
        let report = detect_boundary(&dtn1, &dtn2, cfg.t_bar, &dirs, &cfg.material, &dom, cfg.rho0)?;
        let est = match report.outcome {
            DetectionOutcome::Detected { estimated_d_mu, .. } => estimated_d_mu,
            DetectionOutcome::Indistinguishable { .. } => 0.0,
        };
        noise_rows.push(vec![eps, est, truth.value]);
        if ei == 0 {
            for (ri, ray) in report.rays.iter().enumerate() {
                for (d, r) in ray.depths.iter().zip(&ray.response) {
                    profile_rows.push(vec![ri as f64, *d, *r]);
                }
            }
            rep.record_fit("estimated_d_mu", est);
            rep.record_fit("true_d_mu", truth.value);
            let within = est > truth.value / 3.0 && est < truth.value * 3.0;
            rep.check("detection scale within factor 3", est, &format!("~ {}", truth.value), within);
        }
    }
    record_csv(rep, cfg, "detect_profiles.csv", &["ray", "depth", "response"], &profile_rows)?;
    record_csv(rep, cfg, "noise_sweep.csv", &["eps", "estimated_d_mu", "true_d_mu"], &noise_rows)
}
