//! Named numerical tolerances.
//!
//! The defaults are tuned for `f64`. [`Tolerances::for_scalar`] floors every
//! value at a multiple of the working epsilon so `f32` runs stay meaningful.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RifError};
use crate::scalar::{epsilon, to_f64, Scalar};

/// Relative drop tolerance for trailing polynomial coefficients.
pub const COEFF_DROP: f64 = 1e-12;
/// Root-matching distance used when cancelling numerator/denominator roots.
pub const ROOT_MATCH: f64 = 1e-8;
/// Blaschke zeros must satisfy `|a| <= 1 - INTERIOR`.
pub const INTERIOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Innerness acceptance: grid max of `‖W*W − I‖`.
    pub inner: f64,
    /// Pole-freeness margin: denominators have no roots in `|z| <= 1 + root`.
    pub root: f64,
    /// Row-selection pivot floor.
    pub sigma_min: f64,
    /// Accepted negativity of a trigonometric polynomial on the grid.
    pub psd: f64,
    /// Outer factors: determinant roots satisfy `|z| >= 1 - outer`.
    pub outer: f64,
    /// Spectral-factor residual (non-degenerate symbols).
    pub factor: f64,
    /// Spectral-factor residual for boundary-degenerate symbols.
    pub factor_degenerate: f64,
    /// Relative change of the Bauer factor between doublings.
    pub bauer_change: f64,
    /// Kernel detection threshold, relative to the matrix scale.
    pub kernel: f64,
    /// Deflation remainder threshold, relative to the column scale.
    pub deflate: f64,
    /// Path innerness acceptance.
    pub path: f64,
    /// Endpoint and chaining acceptance for paths.
    pub chain: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            inner: 1e-8,
            root: 1e-9,
            sigma_min: 1e-8,
            psd: 1e-9,
            outer: 1e-7,
            factor: 1e-8,
            factor_degenerate: 1e-4,
            bauer_change: 1e-11,
            kernel: 1e-7,
            deflate: 1e-7,
            path: 1e-6,
            chain: 1e-8,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 12] = [
        "inner",
        "root",
        "sigma_min",
        "psd",
        "outer",
        "factor",
        "factor_degenerate",
        "bauer_change",
        "kernel",
        "deflate",
        "path",
        "chain",
    ];

    /// Defaults floored at a precision-dependent multiple of epsilon.
    pub fn for_scalar<T: Scalar>() -> Self {
        let eps = to_f64(epsilon::<T>());
        let floor = |v: f64, k: f64| v.max(k * eps);
        let d = Self::default();
        Self {
            inner: floor(d.inner, 1e4),
            root: floor(d.root, 1e3),
            sigma_min: floor(d.sigma_min, 1e4),
            psd: floor(d.psd, 1e3),
            outer: floor(d.outer, 1e5),
            factor: floor(d.factor, 1e4),
            factor_degenerate: floor(d.factor_degenerate, 1e6),
            bauer_change: floor(d.bauer_change, 1e2),
            kernel: floor(d.kernel, 1e5),
            deflate: floor(d.deflate, 1e5),
            path: floor(d.path, 1e5),
            chain: floor(d.chain, 1e4),
        }
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "inner" => &mut self.inner,
            "root" => &mut self.root,
            "sigma_min" => &mut self.sigma_min,
            "psd" => &mut self.psd,
            "outer" => &mut self.outer,
            "factor" => &mut self.factor,
            "factor_degenerate" => &mut self.factor_degenerate,
            "bauer_change" => &mut self.bauer_change,
            "kernel" => &mut self.kernel,
            "deflate" => &mut self.deflate,
            "path" => &mut self.path,
            "chain" => &mut self.chain,
            _ => return None,
        })
    }

    /// Overrides one tolerance by name; unknown names and non-positive values are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(RifError::InvalidArgument(format!(
                "tolerance {name} must be positive and finite, got {value}"
            )));
        }
        match self.slot(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(RifError::InvalidArgument(format!("unknown tolerance name `{name}`"))),
        }
    }
}

/// Default evaluation grid: `max(512, 8·maxdeg + 1)`.
pub fn default_grid(max_degree: usize) -> usize {
    512.max(8 * max_degree + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name_rejected() {
        let mut t = Tolerances::default();
        assert!(t.set("inner", 1e-6).is_ok());
        assert_eq!(t.inner, 1e-6);
        assert!(t.set("bogus", 1.0).is_err());
        assert!(t.set("path", -1.0).is_err());
    }

    #[test]
    fn f32_floors_are_looser() {
        let t = Tolerances::for_scalar::<f32>();
        assert!(t.inner > Tolerances::default().inner);
        assert_eq!(Tolerances::for_scalar::<f64>().inner, 1e-8);
    }

    #[test]
    fn grid_rule() {
        assert_eq!(default_grid(3), 512);
        assert_eq!(default_grid(100), 801);
    }
}
