//! Seeded scenario generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use pwbasis_core::domain::{make_domain, AxisBox, Domain};
use pwbasis_core::numerics::SeededRng;
use pwbasis_core::spectra::FrequencySet;

/// Union of 1..=3 disjoint boxes in dimension `d`, each inside its own cell
/// of a lattice with spacing 0.6.
pub fn random_box_union(rng: &mut SeededRng, d: usize) -> Domain {
    let cells_per_axis = 3usize;
    let total = cells_per_axis.pow(d as u32);
    let mut cells: Vec<usize> = (0..total).collect();
    rng.shuffle(&mut cells);
    let count = 1 + rng.below(3);
    let boxes = cells[..count]
        .iter()
        .map(|&cell| {
            let mut lower = Vec::with_capacity(d);
            let mut upper = Vec::with_capacity(d);
            let mut c = cell;
            for _ in 0..d {
                let origin = (c % cells_per_axis) as f64 * 0.6 - 0.6;
                c /= cells_per_axis;
                let a = rng.range(0.0, 0.2);
                let b = rng.range(0.35, 0.6);
                lower.push(origin + a);
                upper.push(origin + b);
            }
            AxisBox::new(lower, upper).unwrap()
        })
        .collect();
    make_domain(boxes).unwrap()
}

/// 1..=max distinct points: integer lattice points in `[-3, 3]^d` plus a
/// jitter of at most 0.2 per coordinate.
pub fn random_frequencies(rng: &mut SeededRng, d: usize, max: usize) -> FrequencySet {
    let count = (1 + rng.below(max)).min(7usize.pow(d as u32));
    let mut lattice: Vec<Vec<i64>> = Vec::new();
    while lattice.len() < count {
        let p: Vec<i64> = (0..d).map(|_| rng.below(7) as i64 - 3).collect();
        if !lattice.contains(&p) {
            lattice.push(p);
        }
    }
    let points = lattice
        .into_iter()
        .map(|p| p.into_iter().map(|x| x as f64 + rng.range(-0.2, 0.2)).collect())
        .collect();
    FrequencySet::new(d, points).unwrap()
}

/// Offset in [1, 2] and slopes small enough that `offset + slope . x` stays
/// positive on the generated domains (|x_j| <= 1.2).
pub fn random_positive_affine(rng: &mut SeededRng, d: usize) -> (f64, Vec<f64>) {
    let offset = rng.range(1.0, 2.0);
    let slope = (0..d).map(|_| rng.range(-0.35, 0.35)).collect();
    (offset, slope)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Tensor Gauss-Legendre integral of `f` over every box of `domain`.
pub fn gauss_integral(domain: &Domain, n: usize, f: impl Fn(&[f64]) -> Complex64) -> Complex64 {
    let (t, w) = gauss_legendre(n);
    let d = domain.dimension();
    let mut total = Complex64::new(0.0, 0.0);
    for b in domain.boxes() {
        for flat in 0..n.pow(d as u32) {
            let mut rest = flat;
            let mut x = vec![0.0; d];
            let mut weight = 1.0;
            for j in 0..d {
                let i = rest % n;
                rest /= n;
                let h = 0.5 * (b.upper()[j] - b.lower()[j]);
                x[j] = b.lower()[j] + h * (t[i] + 1.0);
                weight *= h * w[i];
            }
            total += f(&x) * weight;
        }
    }
    total
}

/// `exp(-2 pi i <x, a>)`.
pub fn e(x: &[f64], a: &[f64]) -> Complex64 {
    let dot: f64 = x.iter().zip(a).map(|(p, q)| p * q).sum();
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * dot)
}

/// Largest eigenvalue magnitude of a Hermitian matrix by power iteration.
pub fn power_iteration(order: usize, get: impl Fn(usize, usize) -> Complex64, iterations: usize) -> f64 {
    let mut v: Vec<Complex64> = (0..order).map(|i| Complex64::new(1.0 + i as f64 * 0.01, 0.3)).collect();
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w: Vec<Complex64> = (0..order).map(|i| (0..order).map(|j| get(i, j) * v[j]).sum()).collect();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        // Rayleigh quotient with the previous iterate.
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        lambda = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / vnorm;
        v = w.into_iter().map(|z| z / norm).collect();
    }
    lambda
}

/// Dense inverse by Gauss-Jordan elimination with partial pivoting.
#[allow(dead_code)]
pub fn inverse(order: usize, get: impl Fn(usize, usize) -> Complex64) -> Vec<Complex64> {
    let n = order;
    let mut a: Vec<Complex64> = (0..n * n).map(|k| get(k / n, k % n)).collect();
    let mut inv: Vec<Complex64> = (0..n * n)
        .map(|k| Complex64::new(if k / n == k % n { 1.0 } else { 0.0 }, 0.0))
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm())).unwrap();
        for j in 0..n {
            a.swap(col * n + j, pivot * n + j);
            inv.swap(col * n + j, pivot * n + j);
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= p;
            inv[col * n + j] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = a[i * n + col];
                for j in 0..n {
                    let (x, y) = (a[col * n + j], inv[col * n + j]);
                    a[i * n + j] -= f * x;
                    inv[i * n + j] -= f * y;
                }
            }
        }
    }
    inv
}
