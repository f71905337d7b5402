//! The supporting-inequality harnesses: the Gaussian convolution identity,
//! the two-sphere one-cylinder inequality over the caloric suite, and the
//! ball interpolation inequality.
//!
//! Run with `cargo run --release --example caloric_inequalities`.

use parprobe::analysis::{
    caloric_suite, check_lemma_fr, check_two_sphere_one_cylinder, cylinder, FrParams,
};

fn main() {
    // convolution identity at three exponent pairs
    println!("Gaussian convolution identity (ratio must be flat across pairs):");
    let mut rng = parprobe::rng::Rng::seed_from(17);
    for &(alpha, beta) in &[(0.0, 0.0), (0.5, 0.5), (1.0, 0.25)] {
        let p = FrParams::new(alpha, beta, 1.0, 2).unwrap();
        let pairs: Vec<_> = (0..6)
            .map(|_| {
                let x = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
                let y = [rng.range(-0.5, 0.5), rng.range(-0.5, 0.5)];
                let s = rng.range(0.0, 0.2);
                (x, y, s, s + rng.range(0.3, 1.2))
            })
            .collect();
        let rep = check_lemma_fr(&p, &pairs).unwrap();
        println!("  {}", rep.descriptor);
    }

    // two-sphere one-cylinder over the caloric suite
    let big_r = 1.0;
    let (r1, r2) = (0.08, 0.2);
    let suite = caloric_suite(10, big_r, 7);
    let mut c_global = 1.0f64;
    for u in &suite {
        let n = cylinder::norms(u, r1, r2, big_r);
        c_global = c_global.max(cylinder::fit_constant(&n, r1, r2, big_r).unwrap());
    }
    println!("\ntwo-sphere one-cylinder, suite of {} caloric functions:", suite.len());
    println!("  one global constant C = {c_global:.3}");
    for u in suite.iter().take(4) {
        let rep = check_two_sphere_one_cylinder(u, r1, r2, big_r, c_global * 1.0001, 0.25).unwrap();
        println!("  slack {:+.3e}  [{}]", rep.slack, rep.descriptor);
    }

    // interpolation inequality on a ball, constant function is the ground case
    let rep = parprobe::analysis::check_interpolation(
        &|_| 2.0,
        &|_| [0.0, 0.0],
        1.0,
        2,
        1.0,
        "constant",
    )
    .unwrap();
    println!("\ninterpolation inequality, constant case: needs C = {:.4}", rep.fitted_constant);
}
