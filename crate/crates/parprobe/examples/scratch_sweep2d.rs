//! Scratch: coarse 2-D blow-up sweep to eyeball the slope before pinning
//! the acceptance configuration.

use parprobe::geometry::inclusion::Domain;
use parprobe::geometry::InclusionFamily;
use parprobe::kernels::Material;
use parprobe::probe::functional::WindowParams;
use parprobe::probe::{blowup_sweep, SweepParams};

fn main() {
    let spacing: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1.0 / 192.0);
    let dom = Domain::new_2d([0.0, 0.0], [1.0, 1.0]);
    let d1 = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.16").unwrap();
    let d2 = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.28").unwrap();
    let mat = Material::new(4.0).unwrap();
    let params = SweepParams {
        window: WindowParams {
            spacing,
            dt_min_frac: 1.0 / 48.0,
            dt_max_frac: 1.0 / 16.0,
            dt_ratio: 1.3,
            margin: 0.1,
        },
        rho0: 0.15,
        delta: 1.0,
        geometry_resolution: 1.0 / 256.0,
        with_dtn_exterior: false,
        dtn_cells: 0,
    };
    let h_list = [0.118, 0.104, 0.0915, 0.0805, 0.0709, 0.0624];
    let start = std::time::Instant::now();
    let sweep =
        blowup_sweep(&d1, &d2, 0.36, [0.5, 0.25, 0.4], &mat, &dom, &params, &h_list).unwrap();
    println!("spacing {spacing}: {:.1}s", start.elapsed().as_secs_f64());
    println!("  h        |U|          S1           S2          err_est");
    for p in &sweep.points {
        println!(
            "  {:<7.4}  {:<11.4e}  {:<11.4e}  {:<11.4e} {:.2e}",
            p.h,
            p.u_volume.abs(),
            p.s1,
            p.s2,
            p.u_volume_err
        );
    }
    println!("slope = {:.4}, R² = {:.5}", sweep.fitted_slope, sweep.r_squared);
}
