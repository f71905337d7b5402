//! Forward transmission solver: maximum principle, convergence against the
//! separable oracle, and the exact two-phase steady state.
//!
//! Run with `cargo run --release --example heat_solver`.

use parprobe::geometry::InclusionFamily;
use parprobe::kernels::Material;
use parprobe::solver::forward::solve_steady;
use parprobe::solver::{solve_forward, BoundaryData, BoundaryLattice, Grid, Scheme};

fn main() {
    let mat = Material::new(4.0).unwrap();

    // moving inclusion, ramped boundary data
    let grid = Grid::new(2, [0.0, 0.0], 48, 48, 1.0 / 48.0, Grid::uniform_times(0.0, 0.5, 100))
        .unwrap();
    let lat = BoundaryLattice::build(&grid);
    let g = BoundaryData::from_fn(&lat, &grid, |x, t| (t / 0.1).min(1.0) * (0.5 + x[0]));
    let inc = InclusionFamily::parse_recipe(2, "disk cx=0.4+0.1*t cy=0.5 r=0.18").unwrap();
    let sol = solve_forward(&g, Some(&inc), &mat, &grid, Scheme::ImplicitEuler).unwrap();
    let last = sol.field.last().unwrap();
    let (min, max) = last
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    println!("moving-disk run: final field range [{min:.4}, {max:.4}] (data range [0, 1.5])");
    println!("total CG iterations: {}", sol.cg_iterations);

    // 1-D two-phase steady state, exact to machine precision
    let nx = 50;
    let grid1 = Grid::new(1, [0.0, 0.0], nx, 1, 1.0 / nx as f64, Grid::uniform_times(0.0, 1.0, 2))
        .unwrap();
    let lat1 = BoundaryLattice::build(&grid1);
    let seg = InclusionFamily::parse_recipe(1, "segment s1=0.5 s2=1.5").unwrap();
    let g_last: Vec<f64> = lat1.faces.iter().map(|f| if f.pos[0] > 0.5 { 1.0 } else { 0.0 }).collect();
    let steady = solve_steady(&g_last, Some(&seg), &mat, &grid1, 0.0).unwrap();
    let k = mat.k();
    let q = 2.0 * k / (k + 1.0);
    let mut worst = 0.0f64;
    for ix in 0..nx {
        let x = grid1.cell_center(ix, 0)[0];
        let exact = if x < 0.5 { q * x } else { 0.5 * q + q / k * (x - 0.5) };
        worst = worst.max((steady[ix] - exact).abs());
    }
    println!("\n1-D two-phase steady state, worst deviation from the exact profile: {worst:.2e}");
}
