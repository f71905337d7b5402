//! Fundamental-solution evaluators: the free-space Gaussian kernel, the
//! two-phase flat-interface kernel (closed form in 1-D, partial-Fourier
//! branch-cut inversion in 2-D), the interface flattening map, and Gaussian
//! envelope bounds.

mod complex;
pub mod envelope;
pub mod flatten;
pub mod gamma0;
pub mod spectral;

pub use envelope::{gaussian_envelope, EnvelopeKind};
pub use flatten::{Chart, FlatteningMap};
pub use gamma0::gamma0;
pub use spectral::{gamma_plus, gamma_plus_fourier, transverse_kernel};

use crate::{Error, Result};

/// Conductivity contrast of the inclusion. The background has conductivity 1,
/// the inclusion `k` with `k > 0`, `k ≠ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Material {
    k: f64,
}

impl Material {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::Material(format!("contrast k must be positive, got {k}")));
        }
        if (k - 1.0).abs() <= 1e-9 {
            return Err(Error::Material(format!(
                "contrast k must differ from 1 (got {k}); the transmission problem degenerates"
            )));
        }
        Ok(Material { k })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }
}

/// A kernel evaluation at one space-time point pair.
#[derive(Clone, Copy, Debug)]
pub struct KernelEval {
    pub value: f64,
    /// Spatial gradient in x; for n = 1 only the first entry is meaningful.
    pub gradient: [f64; 2],
    /// (x, t, y, s) the evaluation was made at.
    pub point_pair: ([f64; 2], f64, [f64; 2], f64),
    /// Estimated quadrature error on `value` (0 for closed forms).
    pub quad_error: f64,
}

impl KernelEval {
    pub fn zero(x: [f64; 2], t: f64, y: [f64; 2], s: f64) -> Self {
        KernelEval { value: 0.0, gradient: [0.0, 0.0], point_pair: (x, t, y, s), quad_error: 0.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn material_rejects_unit_and_nonpositive_contrast() {
        assert!(Material::new(1.0).is_err());
        assert!(Material::new(1.0 + 5e-10).is_err());
        assert!(Material::new(0.0).is_err());
        assert!(Material::new(-2.0).is_err());
        assert!(Material::new(4.0).is_ok());
        assert!(Material::new(0.25).is_ok());
    }
}
