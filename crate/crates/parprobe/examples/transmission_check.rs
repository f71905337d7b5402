//! The flat-interface two-phase kernel: continuity of value and conductive
//! flux across the interface, unit mass, and the parabolic scaling identity.
//!
//! Run with `cargo run --release --example transmission_check`.

use parprobe::kernels::spectral::QuadParams;
use parprobe::kernels::{gamma_plus, Material};

fn main() {
    let mat = Material::new(4.0).unwrap();
    let qp = QuadParams { tol_rel: 1e-10, max_panels: 6000 };
    let y = [0.0, -0.3];
    let eps = 1e-7;

    println!("transmission conditions across x_n = 0 (k = 4):");
    println!("  x'     t      value-jump(rel)  flux-jump(rel)");
    for &(dx, t) in &[(0.0, 0.2), (0.3, 0.1), (-0.5, 0.4)] {
        let up = gamma_plus([dx, eps], t, y, 0.0, &mat, 2, qp).unwrap();
        let lo = gamma_plus([dx, -eps], t, y, 0.0, &mat, 2, qp).unwrap();
        let vj = (up.value - lo.value).abs() / up.value;
        let fj = (mat.k() * up.gradient[1] - lo.gradient[1]).abs() / lo.gradient[1].abs();
        println!("  {dx:<5.1}  {t:<5.2}  {vj:.2e}          {fj:.2e}");
    }

    // mass on the line via the 1-D closed forms
    let mat1 = Material::new(0.25).unwrap();
    let f = |x: f64| gamma_plus([x, 0.0], 0.3, [-0.2, 0.0], 0.0, &mat1, 1, qp).unwrap().value;
    let (lo_m, _) = parprobe::quad::adaptive_gk(&f, -12.0, 0.0, 1e-12, 1e-11, 300);
    let (hi_m, _) = parprobe::quad::adaptive_gk(&f, 0.0, 12.0, 1e-12, 1e-11, 300);
    println!("\n1-D kernel mass (k = 1/4): {:.12}", lo_m + hi_m);

    // scaling identity
    let h = 1.8;
    let a = gamma_plus([0.2, 0.5], 0.6, [0.0, -0.25], 0.0, &mat, 2, qp).unwrap().value;
    let b = gamma_plus([0.2 * h, 0.5 * h], 0.6 * h * h, [0.0, -0.25 * h], 0.0, &mat, 2, qp)
        .unwrap()
        .value;
    println!("\nscaling: Γ₊(ξ,τ;y,0) = {a:.6e}, h²·Γ₊(hξ,h²τ;hy,0) = {:.6e}", h * h * b);
}
