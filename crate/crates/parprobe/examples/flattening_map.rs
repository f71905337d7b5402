//! The interface flattening map Ψ: straightens x_n = φ(x′,t) to ξ_n = 0,
//! identity far away, bi-Lipschitz in between.
//!
//! Run with `cargo run --release --example flattening_map`.

use parprobe::kernels::{Chart, FlatteningMap};

fn main() {
    let map = FlatteningMap::new(Chart::Paraboloid { amplitude: 0.3 }, 1.0, 2.0);
    println!("chart radius r₁ = {:.4}", map.r1);

    println!("\ninterface points map to the zero level:");
    for i in 0..4 {
        let xp = -0.8 * map.r1 + 1.6 * map.r1 * i as f64 / 3.0;
        let xn = map.chart.phi(xp, 0.0);
        let (xi, _) = map.flatten([xp, xn], 0.0);
        println!("  ({xp:+.4}, {xn:+.5}) ↦ ξ_n = {:+.2e}", xi[1]);
    }

    let far = [3.0 * map.r1, 0.5 * map.r1];
    let (xi, _) = map.flatten(far, 0.0);
    println!("\nfar point {far:?} maps to itself: {:?}", xi);

    // sampled bi-Lipschitz constant
    let mut rng = parprobe::rng::Rng::seed_from(2);
    let mut c = 1.0f64;
    for _ in 0..2000 {
        let a = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
        let b = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
        let (fa, _) = map.flatten(a, 0.0);
        let (fb, _) = map.flatten(b, 0.0);
        let num = (fa[0] - fb[0]).hypot(fa[1] - fb[1]);
        let den = (a[0] - b[0]).hypot(a[1] - b[1]);
        if den > 1e-9 {
            c = c.max(num / den).max(den / num);
        }
    }
    println!("sampled bi-Lipschitz constant over 2000 pairs: {c:.3}");
}
