//! Exponential Riesz bases on box domains, translation systems of Paley-Wiener
//! spaces, and the finite-group tiling testbed.
//!
//! Everything in this crate is pure computation over `alloc`: Gram matrices of
//! exponential and translation systems, their Hermitian eigen-bounds, the
//! bound-transfer verifiers between the two systems, vector-valued Gabor Grams,
//! and exhaustive tile/spectrum searches in `Z_{n_1} x ... x Z_{n_d}`.
//! File formats, reports and the command line live in the `pwbasis` crate.
//!
//! Fourier convention: `e_a(x) = exp(-2 pi i <x, a>)` and
//! `f^(xi) = \int f(x) exp(-2 pi i x xi) dx`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod gabor;
mod math;
pub mod numerics;
mod oscillatory;
pub mod paley_wiener;
pub mod spectra;
pub mod tiling;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shared tolerance policy.
///
/// Equality checks use [`ABSOLUTE`](tolerance::ABSOLUTE) when the compared
/// magnitudes are at most one and [`RELATIVE`](tolerance::RELATIVE) otherwise,
/// unless an operation documents its own threshold.
pub mod tolerance {
    pub const ABSOLUTE: f64 = 1e-10;
    pub const RELATIVE: f64 = 1e-9;

    /// Two-sided inequalities between eigen-bounds (sandwich checks).
    pub const SANDWICH: f64 = 1e-8;

    /// `|phi^(xi)|` at or below this value counts as zero.
    pub const SUPPORT_THRESHOLD: f64 = 1e-12;

    /// `|Omega|` must be this close to one for orthonormal-basis claims.
    pub const UNIT_MEASURE: f64 = 1e-9;

    /// A bounds report is degenerate when `lower <= DEGENERATE * upper`.
    pub const DEGENERATE: f64 = 1e-9;

    /// Largest matrix order handled by the dense eigensolver.
    pub const MAX_ORDER: usize = 512;

    /// `a` and `b` agree under the policy.
    pub fn approx_eq(a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        if scale <= 1.0 {
            (a - b).abs() <= ABSOLUTE
        } else {
            (a - b).abs() <= RELATIVE * scale
        }
    }
}

/// A named precondition of a check, with the value that was measured.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl HypothesisCheck {
    pub fn new(name: &'static str, passed: bool, measured: f64, tolerance: f64) -> Self {
        Self {
            name,
            passed,
            measured,
            tolerance,
        }
    }
}
