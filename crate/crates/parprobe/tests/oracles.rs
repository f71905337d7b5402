//! Cross-module oracle checks: the discrete volume functional against
//! semi-analytic spectral-kernel quadrature on a flat-interface
//! configuration, and the sign structure of the DtN gap functional.

use parprobe::geometry::inclusion::Domain;
use parprobe::geometry::{InclusionFamily, ProbeConfig, Shape};
use parprobe::kernels::spectral::QuadParams;
use parprobe::kernels::{gamma0, gamma_plus, Material};
use parprobe::probe::functional::WindowParams;
use parprobe::probe::{gap_functional_dtn, GapEvaluator};
use parprobe::quad::gauss_legendre_on;
use parprobe::solver::{DiscreteDtN, Grid, Scheme};

/// Flat interface, Q₁ = upper half plane, Q₂ = empty: then Γ₂ is the free
/// kernel and Γ₁* the two-phase adjoint, so
/// S₁ = ∫_{x_n>0} ∇Γ₀(x,t;y₁,t₁)·∇Γ₊*(x,t;ȳ,t̄) is computable entirely from
/// the spectral kernels — an independent oracle for the discrete volume
/// quadrature.
#[test]
fn thin_slab_volume_functional_matches_spectral_quadrature() {
    let mat = Material::new(4.0).unwrap();
    let dom = Domain::new_2d([-0.5, -0.5], [0.5, 0.5]);
    let q1 = InclusionFamily::from_shapes(2, vec![Shape::GraphUpper { amp: 0.0 }]);
    let q2 = InclusionFamily::from_shapes(2, vec![]);
    let probe = {
        let mut p = ProbeConfig::from_geometry([0.0, 0.0], [0.0, -1.0], 0.05, 0.3, [0.5, 0.4, 0.8]);
        p.rho = 0.3;
        p
    };
    // discrete route
    let wp = WindowParams {
        spacing: 1.0 / 160.0,
        dt_min_frac: 1.0 / 64.0,
        dt_max_frac: 1.0 / 20.0,
        dt_ratio: 1.3,
        margin: 0.45,
    };
    let eval = GapEvaluator::new(&probe, &q1, &q2, &mat, &dom, 0.1, &wp).unwrap();
    let s1 = eval.volume_functional(1);

    // spectral route: tensor quadrature of ∇Γ₀·∇Γ₊* over the upper half
    // plane × (t1, t_bar)
    let qp = QuadParams { tol_rel: 1e-8, max_panels: 2000 };
    let (t1, tb) = (probe.t1, probe.t_bar);
    let (tns, tws) = gauss_legendre_on(20, t1, tb);
    let (xps, xpw) = gauss_legendre_on(48, -0.75, 0.75);
    let (xns, xnw) = gauss_legendre_on(36, 0.0, 0.75);
    let mut oracle = 0.0;
    for (t, wt) in tns.iter().zip(&tws) {
        for (xn, wn) in xns.iter().zip(&xnw) {
            for (xp, wp_) in xps.iter().zip(&xpw) {
                let x = [*xp, *xn];
                let g0 = gamma0(x, *t, probe.y1, t1, 2);
                // Γ₊*(x,t;ȳ,t̄) = Γ₊(x, t̄−t; ȳ, 0)
                let gp = gamma_plus(x, tb - t, probe.y_bar, 0.0, &mat, 2, qp).unwrap();
                oracle += wt * wn * wp_ * (g0.gradient[0] * gp.gradient[0] + g0.gradient[1] * gp.gradient[1]);
            }
        }
    }
    let rel = (s1.value - oracle).abs() / oracle.abs();
    assert!(
        rel < 0.05,
        "discrete S1 {} vs spectral oracle {oracle} (rel {rel:.3})",
        s1.value
    );
}

#[test]
fn dtn_gap_vanishes_for_identical_inclusions_and_flips_sign_on_swap() {
    let mat = Material::new(4.0).unwrap();
    let dom = Domain::new_2d([0.0, 0.0], [1.0, 1.0]);
    let grid = Grid::new(2, [0.0, 0.0], 24, 24, 1.0 / 24.0, Grid::uniform_times(0.0, 0.4, 32))
        .unwrap();
    let a = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.16").unwrap();
    let b = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.26").unwrap();
    let mk = |f: &InclusionFamily| {
        DiscreteDtN::new(grid.clone(), mat, Some(f.clone()), Scheme::CrankNicolson)
    };
    let probe = {
        let mut p =
            ProbeConfig::from_geometry([0.5, 0.0], [0.0, -1.0], 0.4, 0.9, [0.5, 0.25, 0.4]);
        // snap t1 onto the lattice
        p.t1 = (p.t1 * 32.0 / 0.4).round() * 0.4 / 32.0;
        p
    };
    let margin = 0.45 + 0.1;
    let u_same = gap_functional_dtn(&probe, &mk(&a), &mk(&a), &mat, &dom, 0.15, margin, 1.0 / 48.0)
        .unwrap();
    assert_eq!(u_same.value, 0.0, "identical inclusions must cancel exactly");

    let u_ab = gap_functional_dtn(&probe, &mk(&a), &mk(&b), &mat, &dom, 0.15, margin, 1.0 / 48.0)
        .unwrap();
    let u_ba = gap_functional_dtn(&probe, &mk(&b), &mk(&a), &mat, &dom, 0.15, margin, 1.0 / 48.0)
        .unwrap();
    assert!(u_ab.value != 0.0);
    let rel = (u_ab.value + u_ba.value).abs() / u_ab.value.abs();
    assert!(rel < 0.05, "swap antisymmetry violated: {} vs {}", u_ab.value, u_ba.value);
}
