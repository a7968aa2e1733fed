//! Numerical ranges, numerical diameters and the seminorms they induce on
//! linear maps between full matrix algebras.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and the replication table live in the `opdiam` crate.
//!
//! ```
//! use opdiam_core::{numrange, ComplexMatrix};
//!
//! let e12 = ComplexMatrix::unit(2, 0, 1);
//! let d = numrange::numerical_diameter(&e12, 256, 64).unwrap();
//! assert!((d.value - 1.0).abs() < 1e-8);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod circle;
pub mod diamnorm;
pub mod eig;
pub mod error;
pub mod matrix;
pub mod numrange;
pub mod superop;

pub use circle::{min_enclosing_circle, Circle};
pub use diamnorm::{Budget, Certificate, DiamEstimate, Quantity};
pub use eig::{hermitian_eig, operator_norm, EigenDecomposition};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use numrange::{DiameterResult, RangeSample};
pub use superop::{MapFlags, SuperOp};

/// Absolute and relative tolerances for structural and spectral checks.
///
/// Structural checks (Hermitian, PSD, scalar) compare against
/// `atol * max(1, scale)` where `scale` is the largest entry modulus of the
/// operand, so that the verdict does not flip when an input is multiplied
/// by a large constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn scaled_atol(&self, scale: f64) -> f64 {
        self.atol * scale.max(1.0)
    }
}
