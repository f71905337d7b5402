//! The singular-probe machinery: the volume functionals S₁, S₂ and their gap
//! 𝒰, the DtN-pairing form of 𝒰, the half-space integral I⁽ʰ⁾ with its λ
//! calibration, blow-up sweeps in the probe scale h, and the boundary
//! detection experiment built on top of them.

pub mod detect;
pub mod functional;
pub mod ih;
pub mod sweep;

pub use detect::{detect_boundary, DetectionOutcome, DetectionReport, RayProfile};
pub use functional::{gap_functional_dtn, volume_functional, GapEvaluator, GapFunctional, GapMethod};
pub use ih::{calibrate_lambdas, ih_integral, IhParams};
pub use sweep::{blowup_sweep, BlowupSweep, SweepParams, SweepPoint};
