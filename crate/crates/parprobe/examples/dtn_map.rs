//! The discrete Dirichlet-to-Neumann map: assembly over a nodal basis,
//! operator norms, and the norm of the difference as an inclusion shrinks.
//!
//! Run with `cargo run --release --example dtn_map`.

use parprobe::geometry::InclusionFamily;
use parprobe::kernels::Material;
use parprobe::solver::{assemble_dtn, BoundaryLattice, DtnBasis, Grid};

fn main() {
    let mat = Material::new(4.0).unwrap();
    let grid = Grid::new(2, [0.0, 0.0], 16, 16, 1.0 / 16.0, Grid::uniform_times(0.0, 0.4, 16))
        .unwrap();
    let lat = BoundaryLattice::build(&grid);
    let basis = DtnBasis::nodal(&lat, &grid, 8, 4);
    println!("boundary lattice: {} faces x {} levels, basis size {}", lat.len(), grid.times.len(), basis.len());

    let empty = assemble_dtn(None, &mat, &grid, basis.clone()).unwrap();
    println!("‖Λ_∅‖ (homogeneous) = {:.4}", empty.operator_norm().unwrap());

    println!("\nshrinking-inclusion sweep:");
    println!("  radius   ‖Λ_Q − Λ_∅‖");
    for &r in &[0.25, 0.2, 0.15, 0.1, 0.05] {
        let inc = InclusionFamily::parse_recipe(2, &format!("disk cx=0.5 cy=0.5 r={r}")).unwrap();
        let map = assemble_dtn(Some(&inc), &mat, &grid, basis.clone()).unwrap();
        println!("  {r:<6.2}   {:.6e}", map.difference_norm(&empty).unwrap());
    }

    let path = std::env::temp_dir().join("parprobe_example_dtn.bin");
    let inc = InclusionFamily::parse_recipe(2, "disk cx=0.5 cy=0.5 r=0.2").unwrap();
    let map = assemble_dtn(Some(&inc), &mat, &grid, basis).unwrap();
    map.write_matrix(&path).unwrap();
    let bytes = std::fs::metadata(&path).unwrap().len();
    println!("\nbinary matrix written: {bytes} bytes");
    std::fs::remove_file(path).ok();
}
