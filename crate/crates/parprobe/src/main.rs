//! Thin command-line front end: subcommands map onto the library pipelines.
//!
//! ```text
//! parprobe <subcommand> --config <path> [--jobs N] [--seed S] [--out DIR]
//! ```
//!
//! Exit codes: 0 all checks pass, 1 numeric failure, 2 configuration error.

use parprobe::cli::{emit_plotdata, run, ExperimentConfig, Pipeline};
use std::path::PathBuf;
use std::process::ExitCode;

fn usage() -> &'static str {
    "usage: parprobe <solve|dtn|kernel|probe|detect|calibrate|verify|report> \
     --config <path> [--jobs N] [--seed S] [--out DIR] [--check NAME]\n\
     `kernel` runs the scaling/transmission pipelines, `probe` the sweep or\n\
     identity pipelines, `verify` the analysis harnesses (pick one with\n\
     --check fr|cylinder|interp|fax|asymptotic), `report` re-emits plot data."
}

struct Args {
    subcommand: String,
    config: Option<PathBuf>,
    jobs: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    check: Option<String>,
}

fn parse_args() -> Result<Args, String> {
    let mut it = std::env::args().skip(1);
    let subcommand = it.next().ok_or_else(|| usage().to_string())?;
    let mut args = Args {
        subcommand,
        config: None,
        jobs: None,
        seed: None,
        out: None,
        check: None,
    };
    while let Some(flag) = it.next() {
        let mut need = |name: &str| {
            it.next().ok_or_else(|| format!("flag {name} needs a value"))
        };
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(need("--config")?)),
            "--jobs" => {
                args.jobs = Some(
                    need("--jobs")?
                        .parse()
                        .map_err(|_| "--jobs needs an integer".to_string())?,
                )
            }
            "--seed" => {
                args.seed = Some(
                    need("--seed")?
                        .parse()
                        .map_err(|_| "--seed needs an integer".to_string())?,
                )
            }
            "--out" => args.out = Some(PathBuf::from(need("--out")?)),
            "--check" => args.check = Some(need("--check")?),
            other => return Err(format!("unknown flag '{other}'\n{}", usage())),
        }
    }
    Ok(args)
}

/// Which pipelines a subcommand may dispatch to.
fn allowed(subcommand: &str, check: Option<&str>) -> Result<Vec<Pipeline>, String> {
    Ok(match subcommand {
        "solve" => vec![Pipeline::Solve, Pipeline::SolverConvergence],
        "dtn" => vec![Pipeline::Dtn],
        "kernel" => vec![Pipeline::KernelScaling, Pipeline::KernelTransmission],
        "probe" => vec![Pipeline::ProbeSweep, Pipeline::ProbeIdentity],
        "detect" => vec![Pipeline::Detect],
        "calibrate" => vec![Pipeline::Calibrate],
        "verify" => match check {
            Some("fr") => vec![Pipeline::VerifyFr],
            Some("cylinder") => vec![Pipeline::VerifyCylinder],
            Some("interp") => vec![Pipeline::VerifyInterp],
            Some("fax") => vec![Pipeline::VerifyFax],
            Some("asymptotic") => vec![Pipeline::VerifyAsymptotic],
            Some("geometry") => vec![Pipeline::GeometrySuite],
            Some(other) => return Err(format!("unknown --check '{other}'")),
            None => vec![
                Pipeline::VerifyFr,
                Pipeline::VerifyCylinder,
                Pipeline::VerifyInterp,
                Pipeline::VerifyFax,
                Pipeline::VerifyAsymptotic,
                Pipeline::GeometrySuite,
            ],
        },
        "report" => vec![],
        other => return Err(format!("unknown subcommand '{other}'\n{}", usage())),
    })
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = args.jobs {
        if rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            eprintln!("note: rayon pool already initialized; --jobs ignored");
        }
    }
    let config_path = match &args.config {
        Some(p) => p.clone(),
        None => {
            eprintln!("--config is required\n{}", usage());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match ExperimentConfig::load(&config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }

    if args.subcommand == "report" {
        // re-run the pipeline cheaply? no: re-emit plot data from a stored
        // report is not possible without the CSV list; rerun the pipeline.
        match run(&cfg) {
            Ok(rep) => {
                if let Err(e) = emit_plotdata(&rep, &cfg.out_dir) {
                    eprintln!("plot emission failed: {e}");
                    return ExitCode::from(1);
                }
                println!("plot data written under {}", cfg.out_dir.display());
                return ExitCode::SUCCESS;
            }
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
        }
    }

    let allowed = match allowed(&args.subcommand, args.check.as_deref()) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    if !allowed.contains(&cfg.pipeline) {
        eprintln!(
            "config pipeline '{}' does not belong to subcommand '{}'",
            cfg.pipeline.name(),
            args.subcommand
        );
        return ExitCode::from(2);
    }

    match run(&cfg) {
        Ok(rep) => {
            for e in &rep.ledger {
                println!(
                    "[{}] {}: observed {:.6e}, bound {}",
                    if e.pass { "PASS" } else { "FAIL" },
                    e.invariant,
                    e.observed,
                    e.bound
                );
            }
            println!(
                "report: {}",
                cfg.out_dir.join(format!("{}_report.json", rep.id)).display()
            );
            let _ = emit_plotdata(&rep, &cfg.out_dir);
            if rep.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(parprobe::Error::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
