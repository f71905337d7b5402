//! The half-space probe integral I(h) and its h⁻ⁿ scaling law.
//!
//! Run with `cargo run --release --example kernel_scaling`.

use parprobe::kernels::Material;
use parprobe::probe::{ih_integral, IhParams};

fn main() {
    let lambda = [0.5, 0.25, 0.4];
    let params = IhParams { tol_rel: 5e-4, base_nodes: 20 };
    for &k in &[4.0, 0.25] {
        let mat = Material::new(k).unwrap();
        let (i1, e1) = ih_integral(1.0, lambda, &mat, 2, params).unwrap();
        println!("k = {k}: I(1) = {i1:.6e} (quadrature err ~{e1:.1e})");
        println!("  h       I(h)          I(h)·h²/I(1)");
        for &h in &[0.5, 2.0] {
            let (ih, _) = ih_integral(h, lambda, &mat, 2, params).unwrap();
            println!("  {h:<5.2}  {ih:.6e}   {:.6}", ih * h * h / i1);
        }
    }
    println!("\n1-D branch (closed-form kernels):");
    let mat = Material::new(4.0).unwrap();
    let (i1, _) = ih_integral(1.0, lambda, &mat, 1, params).unwrap();
    let (i2, _) = ih_integral(2.0, lambda, &mat, 1, params).unwrap();
    println!("  I(1) = {i1:.6e},  I(2)·2/I(1) = {:.6}", i2 * 2.0 / i1);
}
