//! Sampled-set geometry: Hausdorff distances and the ε-operations
//! (dilation, erosion, boundary band).
//!
//! Run with `cargo run --release --example hausdorff_and_morphology`.

use parprobe::geometry::{dilate_erode, hausdorff_distance, EpsMode, InclusionFamily};
use parprobe::geometry::inclusion::Domain;

fn main() {
    let dom = Domain::new_2d([-1.0, -1.0], [1.0, 1.0]);
    let res = 1.0 / 160.0;
    let disk = |r: f64| {
        InclusionFamily::parse_recipe(2, &format!("disk cx=0 cy=0 r={r}"))
            .unwrap()
            .time_slice(0.0, &dom, res)
            .unwrap()
    };

    let a = disk(0.4);
    let b = disk(0.6);
    println!("concentric disks r=0.4, 0.6:");
    println!("  d_H                = {:.4} (expect 0.2)", hausdorff_distance(&a, &b).unwrap());

    let star = InclusionFamily::parse_recipe(2, "star cx=0.05 cy=0 r0=0.4 m3=0.06")
        .unwrap()
        .time_slice(0.0, &dom, res)
        .unwrap();
    println!("  d_H(disk, star)    = {:.4}", hausdorff_distance(&a, &star).unwrap());

    let grown = dilate_erode(&a, 0.2, EpsMode::Dilate).unwrap().unwrap();
    println!("\ndilation by 0.2:");
    println!("  d_H(dilated, r=0.6 disk) = {:.4} (resolution {res:.4})",
        hausdorff_distance(&grown, &b).unwrap());

    let shrunk = dilate_erode(&b, 0.2, EpsMode::Erode).unwrap().unwrap();
    println!("erosion of r=0.6 by 0.2:");
    println!("  d_H(eroded, r=0.4 disk)  = {:.4}", hausdorff_distance(&shrunk, &a).unwrap());

    match dilate_erode(&a, 0.5, EpsMode::Erode).unwrap() {
        None => println!("erosion of r=0.4 by 0.5 empties the set (flagged, not an error)"),
        Some(_) => println!("unexpected survivor"),
    }

    let band = dilate_erode(&a, 0.1, EpsMode::BoundaryBand).unwrap().unwrap();
    println!("boundary band [∂A]_0.1 has {} samples", band.points.len());
}
