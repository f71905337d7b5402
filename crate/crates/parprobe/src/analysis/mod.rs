//! Property harnesses for the supporting inequalities and asymptotics: the
//! Gaussian convolution identity, the two-sphere one-cylinder inequality,
//! the L∞–L² interpolation inequality, the parabolic-cylinder L² bound for
//! the two-phase kernel, and the curved-vs-flat interface asymptotics.

pub mod asymptotic;
pub mod cylinder;
pub mod fax;
pub mod fr;
pub mod interp;

pub use asymptotic::{check_asymptotic_estimate, AsymptoticLadder};
pub use cylinder::{caloric_suite, check_two_sphere_one_cylinder, CaloricFunction};
pub use fax::check_prop_fax;
pub use fr::{check_lemma_fr, FrParams};
pub use interp::check_interpolation;

/// One harness instance: both sides of an inequality, the slack, and the
/// constant that was fitted for the suite.
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub fitted_constant: f64,
    pub descriptor: String,
}

impl InequalityReport {
    pub fn passes(&self) -> bool {
        self.slack >= 0.0
    }
}
