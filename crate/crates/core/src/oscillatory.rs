//! Closed-form integrals of low-degree polynomials against `exp(-2 pi i <x, delta>)`
//! over boxes.
//!
//! Every integral is taken about the box center, `x = c + y` with
//! `y in [-h, h]`, which reduces to the unit moments
//! `J_m(theta) = \int_{-1}^{1} t^m exp(i theta t) dt` for `m <= 2`. Small
//! `|theta|` uses the power series, large `|theta|` the trigonometric closed
//! form; both are free of the cancellation in the naive antiderivative.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::AxisBox;
use crate::math::{powi, turn};

const SERIES_RADIUS: f64 = 2.0;
const SERIES_TERMS: usize = 40;

/// `\int_{-1}^{1} t^m exp(i theta t) dt`, `m <= 2`.
pub(crate) fn unit_moment(m: u32, theta: f64) -> Complex64 {
    debug_assert!(m <= 2);
    if theta.abs() < SERIES_RADIUS {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for n in 0..SERIES_TERMS {
            if (m as usize + n) % 2 == 0 {
                sum += term * (2.0 / (m as usize + n + 1) as f64);
            }
            term = term * Complex64::new(0.0, theta) / (n + 1) as f64;
        }
        sum
    } else {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let t = theta;
        match m {
            0 => Complex64::new(2.0 * s / t, 0.0),
            1 => Complex64::new(0.0, 2.0 * (s / (t * t) - c / t)),
            _ => Complex64::new(2.0 * s / t + 4.0 * c / (t * t) - 4.0 * s / (t * t * t), 0.0),
        }
    }
}

/// `\int_l^u (x - c)^m exp(-2 pi i delta x) dx` with `c = (l + u) / 2`.
pub(crate) fn centered_moment(lower: f64, upper: f64, delta: f64, m: u32) -> Complex64 {
    let c = 0.5 * (lower + upper);
    let h = 0.5 * (upper - lower);
    turn(-delta * c) * unit_moment(m, -2.0 * PI * delta * h) * powi(h, m + 1)
}

/// Real quadratic polynomial `q(x) = c0 + b.x + x^T Q x` on `R^d`, `Q`
/// symmetric and stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct QuadraticForm {
    constant: f64,
    linear: Vec<f64>,
    quadratic: Vec<f64>,
}

impl QuadraticForm {
    pub(crate) fn constant(dimension: usize, value: f64) -> Self {
        Self {
            constant: value,
            linear: vec![0.0; dimension],
            quadratic: vec![0.0; dimension * dimension],
        }
    }

    /// `alpha + beta . x`.
    pub(crate) fn affine(alpha: f64, beta: &[f64]) -> Self {
        let d = beta.len();
        Self {
            constant: alpha,
            linear: beta.to_vec(),
            quadratic: vec![0.0; d * d],
        }
    }

    /// `|alpha + beta . x|^2` for real `alpha`, `beta`.
    pub(crate) fn squared_affine(alpha: f64, beta: &[f64]) -> Self {
        let d = beta.len();
        let mut quadratic = vec![0.0; d * d];
        for j in 0..d {
            for k in 0..d {
                quadratic[j * d + k] = beta[j] * beta[k];
            }
        }
        Self {
            constant: alpha * alpha,
            linear: beta.iter().map(|b| 2.0 * alpha * b).collect(),
            quadratic,
        }
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        Self {
            constant: self.constant * factor,
            linear: self.linear.iter().map(|x| x * factor).collect(),
            quadratic: self.quadratic.iter().map(|x| x * factor).collect(),
        }
    }

    fn dimension(&self) -> usize {
        self.linear.len()
    }

    #[cfg(test)]
    pub(crate) fn evaluate(&self, x: &[f64]) -> f64 {
        let d = self.dimension();
        let mut v = self.constant;
        for j in 0..d {
            v += self.linear[j] * x[j];
            for k in 0..d {
                v += self.quadratic[j * d + k] * x[j] * x[k];
            }
        }
        v
    }

    /// `\int_box q(x) exp(-2 pi i <x, delta>) dx`.
    pub(crate) fn box_integral(&self, b: &AxisBox, delta: &[f64]) -> Complex64 {
        let d = self.dimension();
        let c = b.center();
        // Coefficients in y = x - c.
        let mut c0 = self.constant;
        let mut lin = self.linear.clone();
        for j in 0..d {
            c0 += self.linear[j] * c[j];
            for k in 0..d {
                let q = self.quadratic[j * d + k];
                c0 += q * c[j] * c[k];
                lin[j] += 2.0 * q * c[k];
            }
        }
        let has_linear = lin.iter().any(|&x| x != 0.0);
        let has_quadratic = self.quadratic.iter().any(|&x| x != 0.0);
        let max_m = if has_quadratic {
            2
        } else if has_linear {
            1
        } else {
            0
        };

        let moments: Vec<[Complex64; 3]> = (0..d)
            .map(|j| {
                let mut row = [Complex64::new(0.0, 0.0); 3];
                for m in 0..=max_m {
                    row[m as usize] = centered_moment(b.lower()[j], b.upper()[j], delta[j], m);
                }
                row
            })
            .collect();
        let base_except = |skip: &[usize]| -> Complex64 {
            (0..d)
                .filter(|j| !skip.contains(j))
                .map(|j| moments[j][0])
                .product()
        };

        let mut total = base_except(&[]) * c0;
        if has_linear {
            for j in 0..d {
                if lin[j] != 0.0 {
                    total += moments[j][1] * base_except(&[j]) * lin[j];
                }
            }
        }
        if has_quadratic {
            for j in 0..d {
                let q = self.quadratic[j * d + j];
                if q != 0.0 {
                    total += moments[j][2] * base_except(&[j]) * q;
                }
                for k in (j + 1)..d {
                    let q = self.quadratic[j * d + k] + self.quadratic[k * d + j];
                    if q != 0.0 {
                        total += moments[j][1] * moments[k][1] * base_except(&[j, k]) * q;
                    }
                }
            }
        }
        total
    }
}
