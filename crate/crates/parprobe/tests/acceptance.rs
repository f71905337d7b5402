//! Acceptance suite: every criterion is driven by the matching experiment
//! config shipped under `experiments/`, and prints one PASS/FAIL line per
//! checked invariant.

use parprobe::cli::{run, ExperimentConfig, ExperimentReport};
use std::path::PathBuf;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments").join(name)
}

fn out_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("parprobe_acceptance").join(tag);
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run_config(name: &str, tag: &str) -> ExperimentReport {
    let mut cfg = ExperimentConfig::load(&config_path(name)).expect("config loads");
    cfg.out_dir = out_dir(tag);
    let rep = run(&cfg).expect("pipeline runs");
    for e in &rep.ledger {
        println!(
            "[{}] {} :: {}: observed {:.6e}, bound {}",
            if e.pass { "PASS" } else { "FAIL" },
            name,
            e.invariant,
            e.observed,
            e.bound
        );
    }
    println!("{name}: wall {:.1}s", rep.wall_seconds);
    rep
}

#[test]
fn criterion_01_scaling_law() {
    let rep = run_config("c01_kernel_scaling.conf", "c01");
    assert!(rep.all_pass(), "scaling-law criterion failed");
}

#[test]
fn criterion_02_convolution_identity() {
    let rep = run_config("c02_convolution_identity.conf", "c02");
    assert!(rep.all_pass(), "convolution-identity criterion failed");
}

#[test]
fn criterion_03_transmission_conditions() {
    let rep = run_config("c03_transmission.conf", "c03");
    assert!(rep.all_pass(), "transmission criterion failed");
}

#[test]
fn criterion_04_pairing_identity() {
    let rep = run_config("c04_pairing_identity.conf", "c04");
    assert!(rep.all_pass(), "pairing-identity criterion failed");
}

#[test]
fn criterion_05_blowup_exponent() {
    let rep = run_config("c05_blowup.conf", "c05");
    assert!(rep.all_pass(), "blow-up exponent criterion failed");
}

#[test]
fn criterion_06_geometry_equivalences() {
    let rep = run_config("c06_geometry_suite.conf", "c06");
    assert!(rep.all_pass(), "geometry-equivalence criterion failed");
}

#[test]
fn criterion_07_two_sphere_one_cylinder() {
    let rep = run_config("c07_two_sphere_cylinder.conf", "c07");
    assert!(rep.all_pass(), "two-sphere one-cylinder criterion failed");
}

#[test]
fn criterion_08_asymptotic_estimate() {
    let rep = run_config("c08_asymptotic.conf", "c08");
    assert!(rep.all_pass(), "asymptotic-estimate criterion failed");
}

#[test]
fn criterion_09_solver_convergence() {
    let rep = run_config("c09_solver_convergence.conf", "c09");
    assert!(rep.all_pass(), "solver-convergence criterion failed");
}

#[test]
fn criterion_10_determinism() {
    let rep_a = run_config("c10_determinism.conf", "c10_a");
    let rep_b = run_config("c10_determinism.conf", "c10_b");
    assert!(rep_a.all_pass() && rep_b.all_pass());
    assert_eq!(rep_a.csv_files.len(), rep_b.csv_files.len());
    for ((pa, ha), (pb, hb)) in rep_a.csv_files.iter().zip(&rep_b.csv_files) {
        assert_eq!(
            pa.file_name(),
            pb.file_name(),
            "csv file lists diverged"
        );
        assert_eq!(
            ha, hb,
            "rerun with the same seed produced different bytes for {:?}",
            pa.file_name()
        );
        println!(
            "[PASS] c10 determinism :: {:?} hash {ha:016x} reproduced",
            pa.file_name().unwrap()
        );
    }
}
