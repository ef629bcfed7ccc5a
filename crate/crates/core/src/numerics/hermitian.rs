use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::modulus;
use crate::{Error, Result};

/// Dense Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    order: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Absolute tolerance on `entries[i][j] - conj(entries[j][i])`, scaled up
    /// for matrices whose largest entry exceeds one.
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(order: usize, entries: Vec<Complex64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("matrix order must be positive".into()));
        }
        if entries.len() != order * order {
            return Err(Error::OrderMismatch(alloc::format!(
                "{} entries for order {order}",
                entries.len()
            )));
        }
        let scale = entries.iter().map(|z| modulus(*z)).fold(1.0_f64, f64::max);
        let tol = Self::SYMMETRY_TOL * scale;
        for i in 0..order {
            for j in i..order {
                let a = entries[i * order + j];
                let b = entries[j * order + i].conj();
                if !(modulus(a - b) <= tol) {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(Self { order, entries })
    }

    /// Builds the matrix from its upper triangle; the lower triangle is the
    /// mirrored conjugate and the diagonal is forced real.
    pub fn from_upper(order: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(order > 0, "matrix order must be positive");
        let mut entries = vec![Complex64::new(0.0, 0.0); order * order];
        for i in 0..order {
            let d = f(i, i);
            entries[i * order + i] = Complex64::new(d.re, 0.0);
            for j in (i + 1)..order {
                let z = f(i, j);
                entries[i * order + j] = z;
                entries[j * order + i] = z.conj();
            }
        }
        Self { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_upper(order, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_upper(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.order + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| modulus(*z)).fold(0.0, f64::max)
    }

    /// `c * self` for real `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// `max |self - I|` entrywise.
    pub fn deviation_from_identity(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.order {
            for j in 0..self.order {
                let target = if i == j { 1.0 } else { 0.0 };
                let z = self.get(i, j) - Complex64::new(target, 0.0);
                worst = worst.max(modulus(z));
            }
        }
        worst
    }

    /// `max |self - other|` entrywise. Orders must match.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        assert_eq!(self.order, other.order);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| modulus(a - b))
            .fold(0.0, f64::max)
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| {
                self.entries[i * self.order..(i + 1) * self.order]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }
}
