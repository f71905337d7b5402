//! Experiment configuration: a flat key-value text format with dotted keys,
//! schema validation, and environment overrides (PARPROBE_SECTION_KEY).
//!
//! ```text
//! # comment
//! pipeline = probe-sweep
//! seed = 42
//! n = 2
//! domain = 0 0 1 1
//! rho0 = 0.15
//! material.k = 4
//! inclusion.d1 = disk cx=0.5 cy=0.5 r=0.16
//! inclusion.d2 = disk cx=0.5 cy=0.5 r=0.28
//! probe.t_bar = 0.36
//! probe.lambda = 0.5 0.25 0.4
//! sweep.h = 0.12 0.1 0.085
//! ```

use crate::geometry::{Domain, InclusionFamily};
use crate::kernels::Material;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Which experiment to run; mirrors the CLI subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Solve,
    Dtn,
    KernelScaling,
    KernelTransmission,
    ProbeSweep,
    ProbeIdentity,
    Detect,
    Calibrate,
    VerifyFr,
    VerifyCylinder,
    VerifyInterp,
    VerifyFax,
    VerifyAsymptotic,
    GeometrySuite,
    SolverConvergence,
}

impl Pipeline {
    pub fn parse(s: &str) -> Result<Pipeline> {
        Ok(match s {
            "solve" => Pipeline::Solve,
            "dtn" => Pipeline::Dtn,
            "kernel-scaling" => Pipeline::KernelScaling,
            "kernel-transmission" => Pipeline::KernelTransmission,
            "probe-sweep" => Pipeline::ProbeSweep,
            "probe-identity" => Pipeline::ProbeIdentity,
            "detect" => Pipeline::Detect,
            "calibrate" => Pipeline::Calibrate,
            "verify-fr" => Pipeline::VerifyFr,
            "verify-cylinder" => Pipeline::VerifyCylinder,
            "verify-interp" => Pipeline::VerifyInterp,
            "verify-fax" => Pipeline::VerifyFax,
            "verify-asymptotic" => Pipeline::VerifyAsymptotic,
            "geometry-suite" => Pipeline::GeometrySuite,
            "solver-convergence" => Pipeline::SolverConvergence,
            other => {
                return Err(Error::Config(format!(
                    "unknown pipeline '{other}' (see README for the list)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pipeline::Solve => "solve",
            Pipeline::Dtn => "dtn",
            Pipeline::KernelScaling => "kernel-scaling",
            Pipeline::KernelTransmission => "kernel-transmission",
            Pipeline::ProbeSweep => "probe-sweep",
            Pipeline::ProbeIdentity => "probe-identity",
            Pipeline::Detect => "detect",
            Pipeline::Calibrate => "calibrate",
            Pipeline::VerifyFr => "verify-fr",
            Pipeline::VerifyCylinder => "verify-cylinder",
            Pipeline::VerifyInterp => "verify-interp",
            Pipeline::VerifyFax => "verify-fax",
            Pipeline::VerifyAsymptotic => "verify-asymptotic",
            Pipeline::GeometrySuite => "geometry-suite",
            Pipeline::SolverConvergence => "solver-convergence",
        }
    }
}

/// Parsed and validated experiment configuration.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub id: String,
    pub pipeline: Pipeline,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub n: usize,
    pub domain: Domain,
    pub rho0: f64,
    pub material: Material,
    pub inclusion_d1: Option<InclusionFamily>,
    pub inclusion_d2: Option<InclusionFamily>,
    /// None means "calibrate".
    pub lambda: Option<[f64; 3]>,
    pub t_bar: f64,
    pub delta: f64,
    pub h_list: Vec<f64>,
    pub t_bar_list: Vec<f64>,
    pub noise_eps: Vec<f64>,
    pub grid_cells: usize,
    pub grid_steps: usize,
    pub kernel_spacing: f64,
    pub window_spacing: f64,
    pub suite_size: usize,
    pub directions: usize,
    /// Free-form tolerances keyed by name; pipelines read what they need.
    pub tolerances: BTreeMap<String, f64>,
    /// Raw keys for echo into the report.
    pub raw: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "experiment",
    "pipeline",
    "seed",
    "out",
    "n",
    "domain",
    "rho0",
    "material.k",
    "inclusion.d1",
    "inclusion.d2",
    "inclusion.d1_file",
    "inclusion.d2_file",
    "probe.lambda",
    "probe.t_bar",
    "probe.delta",
    "sweep.h",
    "sweep.t_bar",
    "sweep.noise_eps",
    "grid.cells",
    "grid.steps",
    "grid.kernel_spacing",
    "grid.window_spacing",
    "suite.size",
    "detect.directions",
    "boundary.recipe",
];

impl ExperimentConfig {
    /// Read a config file, apply PARPROBE_* environment overrides, validate
    /// against the schema.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut kv = parse_kv(&text)?;
        apply_env_overrides(&mut kv);
        Self::from_map(kv)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut kv = parse_kv(text)?;
        apply_env_overrides(&mut kv);
        Self::from_map(kv)
    }

    fn from_map(kv: BTreeMap<String, String>) -> Result<Self> {
        for key in kv.keys() {
            if key.starts_with("tolerance.") {
                continue;
            }
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown config key '{key}'")));
            }
        }
        let get = |k: &str| kv.get(k).map(|s| s.as_str());
        let req = |k: &str| {
            get(k).ok_or_else(|| Error::Config(format!("missing required key '{k}'")))
        };
        let parse_f64 = |k: &str, v: &str| {
            v.parse::<f64>().map_err(|_| Error::Config(format!("key '{k}': '{v}' is not a number")))
        };

        let pipeline = Pipeline::parse(req("pipeline")?)?;
        let id = get("experiment").unwrap_or(pipeline.name()).to_string();
        let seed = get("seed").unwrap_or("0").parse::<u64>().map_err(|_| {
            Error::Config("seed must be a nonnegative integer".into())
        })?;
        let out_dir = PathBuf::from(get("out").unwrap_or("out"));
        let n: usize = get("n").unwrap_or("2").parse().map_err(|_| Error::Config("n must be 1 or 2".into()))?;
        if n != 1 && n != 2 {
            return Err(Error::Config(format!("n must be 1 or 2, got {n}")));
        }
        let domain = match get("domain") {
            Some(v) => {
                let parts: Vec<f64> = v
                    .split_whitespace()
                    .map(|p| parse_f64("domain", p))
                    .collect::<Result<_>>()?;
                match (n, parts.len()) {
                    (1, 2) => Domain::new_1d(parts[0], parts[1]),
                    (2, 4) => Domain::new_2d([parts[0], parts[1]], [parts[2], parts[3]]),
                    _ => {
                        return Err(Error::Config(
                            "domain needs 2 numbers for n=1 or 4 numbers for n=2".into(),
                        ))
                    }
                }
            }
            None => {
                if n == 1 {
                    Domain::new_1d(0.0, 1.0)
                } else {
                    Domain::new_2d([0.0, 0.0], [1.0, 1.0])
                }
            }
        };
        let rho0 = parse_f64("rho0", get("rho0").unwrap_or("0.15"))?;
        if rho0 <= 0.0 {
            return Err(Error::Config("rho0 must be positive".into()));
        }
        let material = Material::new(parse_f64("material.k", get("material.k").unwrap_or("4"))?)
            .map_err(|e| Error::Config(format!("{e}")))?;
        let parse_inclusion = |key: &str, file_key: &str| -> Result<Option<InclusionFamily>> {
            if let Some(recipe) = get(key) {
                return InclusionFamily::parse_recipe(n, recipe).map(Some);
            }
            if let Some(file) = get(file_key) {
                let raster = crate::geometry::gridfile::read_raster(Path::new(file))?;
                return Ok(Some(InclusionFamily::from_raster(raster)));
            }
            Ok(None)
        };
        let inclusion_d1 = parse_inclusion("inclusion.d1", "inclusion.d1_file")?;
        let inclusion_d2 = parse_inclusion("inclusion.d2", "inclusion.d2_file")?;
        let lambda = match get("probe.lambda") {
            None | Some("calibrate") => None,
            Some(v) => {
                let parts: Vec<f64> = v
                    .split_whitespace()
                    .map(|p| parse_f64("probe.lambda", p))
                    .collect::<Result<_>>()?;
                if parts.len() != 3 {
                    return Err(Error::Config("probe.lambda needs three values or 'calibrate'".into()));
                }
                Some([parts[0], parts[1], parts[2]])
            }
        };
        let t_bar = parse_f64("probe.t_bar", get("probe.t_bar").unwrap_or("0.36"))?;
        let delta = parse_f64("probe.delta", get("probe.delta").unwrap_or("1.0"))?;
        let h_list: Vec<f64> = match get("sweep.h") {
            Some(v) => v
                .split_whitespace()
                .map(|p| parse_f64("sweep.h", p))
                .collect::<Result<_>>()?,
            None => vec![],
        };
        let t_bar_list: Vec<f64> = match get("sweep.t_bar") {
            Some(v) => v
                .split_whitespace()
                .map(|p| parse_f64("sweep.t_bar", p))
                .collect::<Result<_>>()?,
            None => vec![],
        };
        let noise_eps: Vec<f64> = match get("sweep.noise_eps") {
            Some(v) => v
                .split_whitespace()
                .map(|p| parse_f64("sweep.noise_eps", p))
                .collect::<Result<_>>()?,
            None => vec![],
        };
        let grid_cells = get("grid.cells").unwrap_or("64").parse().map_err(|_| {
            Error::Config("grid.cells must be an integer".into())
        })?;
        let grid_steps = get("grid.steps").unwrap_or("64").parse().map_err(|_| {
            Error::Config("grid.steps must be an integer".into())
        })?;
        let kernel_spacing =
            parse_f64("grid.kernel_spacing", get("grid.kernel_spacing").unwrap_or("0.01"))?;
        let window_spacing =
            parse_f64("grid.window_spacing", get("grid.window_spacing").unwrap_or("0.005"))?;
        let suite_size = get("suite.size").unwrap_or("20").parse().map_err(|_| {
            Error::Config("suite.size must be an integer".into())
        })?;
        let directions = get("detect.directions").unwrap_or("8").parse().map_err(|_| {
            Error::Config("detect.directions must be an integer".into())
        })?;
        let mut tolerances = BTreeMap::new();
        for (k, v) in &kv {
            if let Some(name) = k.strip_prefix("tolerance.") {
                tolerances.insert(name.to_string(), parse_f64(k, v)?);
            }
        }
        Ok(ExperimentConfig {
            id,
            pipeline,
            seed,
            out_dir,
            n,
            domain,
            rho0,
            material,
            inclusion_d1,
            inclusion_d2,
            lambda,
            t_bar,
            delta,
            h_list,
            t_bar_list,
            noise_eps,
            grid_cells,
            grid_steps,
            kernel_spacing,
            window_spacing,
            suite_size,
            directions,
            tolerances,
            raw: kv,
        })
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn require_inclusions(&self) -> Result<(&InclusionFamily, &InclusionFamily)> {
        match (&self.inclusion_d1, &self.inclusion_d2) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Config(format!(
                "pipeline '{}' needs inclusion.d1 and inclusion.d2",
                self.pipeline.name()
            ))),
        }
    }
}

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut kv = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value', got '{line}'", lineno + 1))
        })?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(kv)
}

/// PARPROBE_GRID_CELLS=128 overrides `grid.cells`, PARPROBE_SEED overrides
/// `seed`, and so on (single underscore maps to the key's dot).
fn apply_env_overrides(kv: &mut BTreeMap<String, String>) {
    for (var, value) in std::env::vars() {
        if let Some(rest) = var.strip_prefix("PARPROBE_") {
            let key = rest.to_lowercase().replacen('_', ".", 1);
            let key = if KNOWN_KEYS.contains(&key.as_str()) || key.starts_with("tolerance.") {
                key
            } else {
                rest.to_lowercase()
            };
            kv.insert(key, value);
        }
    }
}
