//! Numerical experiments for detecting a time-varying inclusion in a thermal
//! conductor from boundary measurements.
//!
//! The library simulates the forward transmission problem
//! `∂_t u − div((1 + (k−1)χ_Q)∇u) = 0` on a space-time grid, assembles the
//! discrete Dirichlet-to-Neumann map, evaluates the free-space and
//! flat-interface fundamental solutions in closed/quadrature form, and runs
//! the singular-probe experiments whose blow-up rates and scaling laws drive
//! inclusion detection.
//!
//! Modules mirror the pipeline:
//!
//! * [`geometry`] — sampled sets, Hausdorff and modified distances, boundary
//!   charts, probe-point construction, chains of balls.
//! * [`kernels`] — the Gaussian kernel, the two-phase half-space kernel and
//!   its partial Fourier transform, the interface flattening map, Gaussian
//!   envelope bounds.
//! * [`solver`] — finite-volume forward solver, boundary flux extraction,
//!   discrete DtN assembly, mollified fundamental solutions.
//! * [`probe`] — the gap functionals S₁, S₂, 𝒰, the half-space integral
//!   I⁽ʰ⁾, λ-calibration, blow-up sweeps and boundary detection.
//! * [`analysis`] — property harnesses for the supporting inequalities
//!   (Gaussian convolution identity, two-sphere one-cylinder, interpolation,
//!   cylinder L² bound, curved-vs-flat interface asymptotics).
//! * [`cli`] — experiment configs, orchestration, CSV/JSON reports.
//!
//! Runnable demonstrations of each capability live in `examples/`; the thin
//! `parprobe` binary exposes the same pipelines as subcommands.

pub mod analysis;
pub mod cli;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod probe;
pub mod quad;
pub mod rng;
pub mod solver;

use std::fmt;

/// Crate-wide error type.
#[derive(Debug)]
pub enum Error {
    /// An operation received an empty set or slice where content is required.
    EmptySet(&'static str),
    /// A documented precondition does not hold; the message names the bound.
    Precondition(String),
    /// Local graph chart construction failed at a boundary point.
    ChartFailure { point: [f64; 2], detail: String },
    /// A quadrature did not reach the requested tolerance.
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    /// An iterative linear solve stalled.
    LinearSolve { iterations: usize, residual: f64 },
    /// λ-calibration found no triple above the significance threshold.
    Calibration(String),
    /// Configuration file or schema violation.
    Config(String),
    /// Material parameter out of range (k ≤ 0 or k = 1).
    Material(String),
    /// Unsupported kernel configuration (e.g. source/evaluation sides).
    UnsupportedConfiguration(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySet(what) => write!(f, "empty set: {what}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::ChartFailure { point, detail } => {
                write!(f, "chart construction failed at ({}, {}): {detail}", point[0], point[1])
            }
            Error::QuadratureNonConvergence { achieved, requested } => write!(
                f,
                "quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::LinearSolve { iterations, residual } => {
                write!(f, "linear solve stalled after {iterations} iterations, residual {residual:.3e}")
            }
            Error::Calibration(msg) => write!(f, "calibration failed: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Material(msg) => write!(f, "material error: {msg}"),
            Error::UnsupportedConfiguration(msg) => write!(f, "unsupported configuration: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
