//! Cyclic complex Jacobi for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the real symmetric Jacobi rotation that annihilates
//! the (now real) pivot. Sweeps continue until the off-diagonal Frobenius
//! norm falls below `1e-14 * ||A||_F`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::HermitianMatrix;
use crate::math::{modulus, sqrt};
use crate::tolerance::MAX_ORDER;
use crate::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Largest accepted `max_i ||M v_i - lambda_i v_i|| / (||M||_max * order)`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

const OFF_DIAGONAL_STOP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub residual: f64,
}

/// Eigenvalues in ascending order; eigenvector `i` is column `i` of the
/// row-major `vectors` array.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
    pub residual: f64,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        let n = self.values.len();
        (0..n).map(|k| self.vectors[k * n + i]).collect()
    }
}

pub fn eigen_bounds(m: &HermitianMatrix) -> Result<EigenBounds> {
    let dec = hermitian_eigen(m)?;
    Ok(EigenBounds {
        lambda_min: dec.values[0],
        lambda_max: dec.values[dec.values.len() - 1],
        residual: dec.residual,
    })
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = m.order();
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge { order: n, cap: MAX_ORDER });
    }
    let mut a: Vec<Complex64> = m.entries().to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let frobenius = sqrt(a.iter().map(|z| z.norm_sqr()).sum());
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off == 0.0 || off <= OFF_DIAGONAL_STOP * frobenius {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweep(&mut a, &mut v, n, sweeps);
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + col] = v[k * n + src];
        }
    }

    let mut dec = EigenDecomposition {
        values,
        vectors,
        residual: 0.0,
        sweeps,
    };
    dec.residual = residual(m, &dec);
    if !(dec.residual <= RESIDUAL_LIMIT) {
        return Err(Error::EigenResidual {
            residual: dec.residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    Ok(dec)
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * a[i * n + j].norm_sqr();
        }
    }
    sqrt(sum)
}

fn sweep(a: &mut [Complex64], v: &mut [Complex64], n: usize, sweep_index: usize) {
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = a[p * n + q];
            let abs = modulus(apq);
            if abs == 0.0 {
                continue;
            }
            let app = a[p * n + p].re;
            let aqq = a[q * n + q].re;
            let g = 100.0 * abs;
            if sweep_index > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                continue;
            }
            rotate(a, v, n, p, q, apq, abs, app, aqq);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rotate(
    a: &mut [Complex64],
    v: &mut [Complex64],
    n: usize,
    p: usize,
    q: usize,
    apq: Complex64,
    abs: f64,
    app: f64,
    aqq: f64,
) {
    let phase = apq / abs;
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + sqrt(theta * theta + 1.0));
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / sqrt(t * t + 1.0);
    let s = t * c;
    let sc = phase.conj() * s;
    let cc = phase.conj() * c;

    // Columns p and q of A U; the rows follow by Hermitian symmetry.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = akp * c - akq * sc;
        let new_kq = akp * s + akq * cc;
        a[k * n + p] = new_kp;
        a[k * n + q] = new_kq;
        a[p * n + k] = new_kp.conj();
        a[q * n + k] = new_kq.conj();
    }
    a[p * n + p] = Complex64::new(app - t * abs, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * abs, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * sc;
        v[k * n + q] = vkp * s + vkq * cc;
    }
}

fn residual(m: &HermitianMatrix, dec: &EigenDecomposition) -> f64 {
    let n = m.order();
    let scale = m.max_abs() * n as f64;
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0_f64;
    for i in 0..n {
        let x = dec.vector(i);
        let mx = m.apply(&x);
        let r: f64 = mx
            .iter()
            .zip(&x)
            .map(|(y, xi)| (y - xi * dec.values[i]).norm_sqr())
            .sum();
        worst = worst.max(sqrt(r));
    }
    worst / scale
}
