//! Time-varying inclusions: recipes with trig coefficients, modified
//! distance with its maximizer, exterior normals, and the raw grid file
//! format.
//!
//! Run with `cargo run --release --example inclusion_families`.

use parprobe::geometry::gridfile::{read_raster, write_raster};
use parprobe::geometry::inclusion::Domain;
use parprobe::geometry::{boundary_normal, modified_distance, InclusionFamily, RasterFamily};

fn main() {
    let dom = Domain::new_2d([0.0, 0.0], [1.0, 1.0]);
    let res = 1.0 / 192.0;

    // a drifting disk against a breathing star
    let d1 = InclusionFamily::parse_recipe(2, "disk cx=0.45+0.05*sin(2*t) cy=0.5 r=0.16").unwrap();
    let d2 = InclusionFamily::parse_recipe(2, "star cx=0.5 cy=0.5 r0=0.2+0.02*cos(3*t) m2=0.05").unwrap();

    println!("t      d_mu     maximizer          side");
    for i in 0..5 {
        let t = i as f64 * 0.25;
        let md = modified_distance(&d1, &d2, t, &dom, res).unwrap();
        println!(
            "{t:.2}   {:.4}   ({:.3}, {:.3})   {:?}",
            md.value, md.maximizer[0], md.maximizer[1], md.side
        );
    }

    let t = 0.5;
    let md = modified_distance(&d1, &d2, t, &dom, res).unwrap();
    let fam = if md.side == parprobe::geometry::Side::First { &d1 } else { &d2 };
    let nv = boundary_normal(fam, md.maximizer, t, &dom, res).unwrap();
    println!("\nexterior normal at the maximizer (t = {t}): ({:.3}, {:.3})", nv[0], nv[1]);

    // rasterize d1 onto a coarse space-time lattice and round-trip the file
    let (nx, ny, steps) = (48usize, 48usize, 8usize);
    let spacing = 1.0 / nx as f64;
    let mut indicator = vec![0u8; nx * ny * steps];
    for s in 0..steps {
        let ts = s as f64 / (steps - 1) as f64;
        for iy in 0..ny {
            for ix in 0..nx {
                let x = [(ix as f64 + 0.5) * spacing, (iy as f64 + 0.5) * spacing];
                if d1.indicator(x, ts) {
                    indicator[s * nx * ny + ix + nx * iy] = 1;
                }
            }
        }
    }
    let raster = RasterFamily {
        n: 2,
        origin: [0.0, 0.0],
        nx,
        ny,
        spacing,
        t_end: 1.0,
        steps,
        indicator,
    };
    let path = std::env::temp_dir().join("parprobe_example_family.grid");
    write_raster(&path, &raster).unwrap();
    let back = InclusionFamily::from_raster(read_raster(&path).unwrap());
    let agree = back.indicator([0.45, 0.5], 0.0) == d1.indicator([0.45, 0.5], 0.0);
    println!("\ngrid file round trip at ({}, {}): agrees = {agree}", 0.45, 0.5);
    std::fs::remove_file(path).ok();
}
