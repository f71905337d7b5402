//! Geometric constructions: the chain of balls along an arc and relative
//! graph charts between nearby boundaries.
//!
//! Run with `cargo run --release --example chain_and_charts`.

use parprobe::geometry::inclusion::{Domain, GeometryConfig};
use parprobe::geometry::{chain_of_balls, relative_graph_gamma, InclusionFamily};

fn main() {
    // chain of balls along a bent corridor
    let mut arc: Vec<[f64; 2]> = Vec::new();
    for i in 0..=120 {
        let t = i as f64 / 120.0;
        arc.push([2.5 * t, 0.6 * (2.5 * t).sin()]);
    }
    let target = *arc.last().unwrap();
    let rho_bar = 0.12;
    let chain = chain_of_balls(&arc, rho_bar, target).unwrap();
    println!("chain of balls (ρ̄ = {rho_bar}): {} centers", chain.len());
    for w in chain.windows(2).take(3) {
        let d = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        println!("  consecutive spacing {d:.12} (exactly 2ρ̄ = {})", 2.0 * rho_bar);
    }

    // relative graphs: concentric star-shaped boundaries
    let dom = Domain::new_2d([-1.0, -1.0], [1.0, 1.0]);
    let res = 1.0 / 256.0;
    let cfg = GeometryConfig::new(0.8, 0.5, 4.0, 2).unwrap();
    let s1 = InclusionFamily::parse_recipe(2, "star cx=0 cy=0 r0=0.4 m3=0.05")
        .unwrap()
        .time_slice(0.0, &dom, res)
        .unwrap();
    let s2 = InclusionFamily::parse_recipe(2, "star cx=0 cy=0 r0=0.415 m3=0.05")
        .unwrap()
        .time_slice(0.0, &dom, res)
        .unwrap();
    let gamma = relative_graph_gamma(&s1, &s2, &cfg).unwrap();
    println!("\nrelative-graph gap γ(Ω₁, Ω₂) = {gamma:.4} (radial offset 0.015)");

    // chart failure is a diagnostic, not a panic
    let far = InclusionFamily::parse_recipe(2, "disk cx=0 cy=0 r=0.1")
        .unwrap()
        .time_slice(0.0, &dom, res)
        .unwrap();
    match relative_graph_gamma(&s1, &far, &cfg) {
        Err(e) => println!("distant boundary correctly refused: {e}"),
        Ok(g) => println!("unexpected gamma {g}"),
    }
}
