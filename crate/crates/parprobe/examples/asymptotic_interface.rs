//! Curved-vs-flat interface asymptotics: the kernel difference shrinks
//! linearly in the parabolic distance as samples approach the contact point
//! nontangentially.
//!
//! Run with `cargo run --release --example asymptotic_interface`.

use parprobe::analysis::check_asymptotic_estimate;
use parprobe::kernels::Material;

fn main() {
    let mat = Material::new(4.0).unwrap();
    let scales: Vec<f64> = (0..6).map(|i| 0.24 * 0.78f64.powi(i)).collect();
    let ladder = check_asymptotic_estimate(0.1, 1.0, &mat, &scales, 12).unwrap();

    println!("paraboloid chart, amplitude 0.1/ρ₀:");
    println!("  scale    parab.dist  |ΔΓ|·t        control (φ≡0)");
    for r in &ladder.rungs {
        println!(
            "  {:<7.4}  {:<9.4}  {:<12.4e}  {:.4e}",
            r.scale, r.parabolic_distance, r.value_diff, r.control_diff
        );
    }
    println!(
        "\nvalue slope {:.3} (R² {:.4}); gradient slope {:.3} → fitted Hölder β ≈ {:.3}",
        ladder.value_slope, ladder.value_r_squared, ladder.gradient_slope, ladder.fitted_beta
    );
}
