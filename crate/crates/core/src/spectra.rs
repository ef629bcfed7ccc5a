//! Exponential systems `{e_a}` on `Omega`: Gram assembly, Riesz bounds and
//! orthonormality checks.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{AxisBox, Domain, QuadratureRule};
use crate::math::{sin_pi, turn};
use crate::numerics::{eigen_bounds, HermitianMatrix};
use crate::oscillatory::QuadraticForm;
use crate::paley_wiener::SpectralWeight;
use crate::tolerance::{DEGENERATE, MAX_ORDER};
use crate::{Error, Result};

/// Nodes per axis per mask cell when an unweighted Gram on a mask-only
/// domain falls back to quadrature.
pub const MASK_NODES_PER_CELL: usize = 4;

/// Below this `|delta_j|` the closed-form factor switches to `u_j - l_j`.
const ZERO_FREQUENCY: f64 = 1e-12;

/// Two points closer than this in sup-norm count as the same frequency.
const DISTINCT_POINTS: f64 = 1e-12;

/// Finite truncation of the frequency/translation set `A`, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySet {
    dimension: usize,
    points: Vec<f64>,
}

impl FrequencySet {
    pub fn new(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        let mut flat = Vec::with_capacity(points.len() * dimension);
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("frequency coordinates must be finite".into()));
            }
            flat.extend_from_slice(p);
        }
        Self::from_flat(dimension, flat)
    }

    pub fn from_flat(dimension: usize, points: Vec<f64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptyFrequencySet);
        }
        if points.len() % dimension != 0 {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: points.len() % dimension,
            });
        }
        let set = Self { dimension, points };
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                let gap = set
                    .point(i)
                    .iter()
                    .zip(set.point(j))
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                if gap <= DISTINCT_POINTS {
                    return Err(Error::DuplicateFrequency { first: i, second: j });
                }
            }
        }
        Ok(set)
    }

    /// `{lo, lo + 1, ..., hi}` in one dimension.
    pub fn integer_range(lo: i64, hi: i64) -> Result<Self> {
        Self::from_flat(1, (lo..=hi).map(|k| k as f64).collect())
    }

    /// `{lo..=hi}^d` in lexicographic order, first axis slowest.
    pub fn integer_grid(dimension: usize, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::EmptyFrequencySet);
        }
        let side = (hi - lo + 1) as usize;
        let total = side.pow(dimension as u32);
        let mut flat = Vec::with_capacity(total * dimension);
        for mut k in 0..total {
            let mut coords = vec![0.0; dimension];
            for j in (0..dimension).rev() {
                coords[j] = (lo + (k % side) as i64) as f64;
                k /= side;
            }
            flat.extend(coords);
        }
        Self::from_flat(dimension, flat)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks(self.dimension)
    }

    /// Every point shifted by `t`.
    pub fn shifted(&self, t: &[f64]) -> Self {
        assert_eq!(t.len(), self.dimension);
        let points = self
            .points
            .chunks(self.dimension)
            .flat_map(|p| p.iter().zip(t).map(|(x, s)| x + s))
            .collect();
        Self {
            dimension: self.dimension,
            points,
        }
    }

    fn difference(&self, i: usize, j: usize) -> Vec<f64> {
        self.point(i).iter().zip(self.point(j)).map(|(a, b)| a - b).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

/// Row labels of a Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum GramLabels {
    Frequencies(FrequencySet),
    /// Gabor rows: `(shift index, modulation index)` into `freqs`.
    Pairs {
        freqs: FrequencySet,
        pairs: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub matrix: HermitianMatrix,
    pub labels: GramLabels,
    pub provenance: Provenance,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.matrix.order()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsVerdict {
    RieszBasis,
    /// Frame-operator bounds; the Riesz property was not examined.
    FrameOnlyNotTested,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub condition: f64,
    pub verdict: BoundsVerdict,
    pub residual: f64,
}

impl BoundsReport {
    pub(crate) fn from_eigen(lambda_min: f64, lambda_max: f64, residual: f64, nondegenerate: BoundsVerdict) -> Self {
        let lower = lambda_min.max(0.0);
        let upper = lambda_max.max(lower);
        let degenerate = lower <= DEGENERATE * upper;
        Self {
            lower,
            upper,
            condition: if lower > 0.0 { upper / lower } else { f64::INFINITY },
            verdict: if degenerate { BoundsVerdict::Degenerate } else { nondegenerate },
            residual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthonormalCheck {
    pub orthonormal: bool,
    pub max_deviation: f64,
}

/// `\int_Omega e_a(x) conj(e_b(x)) dx`, exact, over the box representation.
pub fn exp_inner_closed(domain: &Domain, a: &[f64], b: &[f64]) -> Result<Complex64> {
    if !domain.has_boxes() {
        return Err(Error::MaskOnlyDomain);
    }
    check_dimension(domain.dimension(), a.len())?;
    check_dimension(domain.dimension(), b.len())?;
    let delta: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    Ok(domain.boxes().iter().map(|bx| box_exponential(bx, &delta)).sum())
}

/// One box: `prod_j (e^{-2 pi i d_j u_j} - e^{-2 pi i d_j l_j}) / (-2 pi i d_j)`,
/// evaluated as `e^{-pi i d_j (u_j + l_j)} sin(pi d_j (u_j - l_j)) / (pi d_j)`.
fn box_exponential(bx: &AxisBox, delta: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, &d) in delta.iter().enumerate() {
        let (l, u) = (bx.lower()[j], bx.upper()[j]);
        let factor = if d.abs() < ZERO_FREQUENCY {
            Complex64::new(u - l, 0.0)
        } else {
            turn(-0.5 * d * (u + l)) * (sin_pi(d * (u - l)) / (PI * d))
        };
        acc *= factor;
    }
    acc
}

/// `G[a, a'] = \int_Omega w e_a conj(e_a')` with `w = |phi^|^2` when a weight
/// is given and `w = 1` otherwise.
///
/// Unweighted box domains use the exact closed form, as do indicator,
/// constant and affine weights on box domains. Everything else is assembled
/// on the weight's quadrature nodes (or a default midpoint rule for
/// unweighted mask domains).
pub fn exp_gram(domain: &Domain, freqs: &FrequencySet, weight: Option<&SpectralWeight>) -> Result<GramMatrix> {
    check_order(freqs.len())?;
    check_dimension(domain.dimension(), freqs.dimension())?;
    match weight {
        None if domain.has_boxes() => Ok(closed_form_gram(domain, freqs)),
        None => {
            let rule = domain.quadrature(MASK_NODES_PER_CELL)?;
            quadrature_gram(&rule, freqs, None)
        }
        Some(w) => {
            if w.domain() != domain {
                return Err(Error::IncompatibleWeight);
            }
            match w.squared_modulus_form() {
                Some(form) if domain.has_boxes() => Ok(weighted_closed_form_gram(domain, freqs, &form)),
                _ => quadrature_gram(w.rule(), freqs, Some(&w.density())),
            }
        }
    }
}

fn closed_form_gram(domain: &Domain, freqs: &FrequencySet) -> GramMatrix {
    let matrix = HermitianMatrix::from_upper(freqs.len(), |i, j| {
        let delta = freqs.difference(i, j);
        domain.boxes().iter().map(|bx| box_exponential(bx, &delta)).sum()
    });
    GramMatrix {
        matrix,
        labels: GramLabels::Frequencies(freqs.clone()),
        provenance: Provenance::ClosedForm,
    }
}

pub(crate) fn weighted_closed_form_gram(domain: &Domain, freqs: &FrequencySet, form: &QuadraticForm) -> GramMatrix {
    let matrix = HermitianMatrix::from_upper(freqs.len(), |i, j| {
        let delta = freqs.difference(i, j);
        domain.boxes().iter().map(|bx| form.box_integral(bx, &delta)).sum()
    });
    GramMatrix {
        matrix,
        labels: GramLabels::Frequencies(freqs.clone()),
        provenance: Provenance::ClosedForm,
    }
}

/// `G[a, a'] = sum_k w_k rho_k e_a(xi_k) conj(e_a'(xi_k))` on a quadrature
/// rule, with `rho = 1` when `density` is `None`.
pub fn quadrature_gram(rule: &QuadratureRule, freqs: &FrequencySet, density: Option<&[f64]>) -> Result<GramMatrix> {
    check_order(freqs.len())?;
    check_dimension(rule.dimension(), freqs.dimension())?;
    if let Some(rho) = density {
        if rho.len() != rule.len() {
            return Err(Error::IncompatibleWeight);
        }
    }
    let n = freqs.len();
    let mut acc = vec![Complex64::new(0.0, 0.0); n * n];
    let mut phases = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..rule.len() {
        let w = rule.weights()[k] * density.map_or(1.0, |rho| rho[k]);
        if w == 0.0 {
            continue;
        }
        let xi = rule.node(k);
        for (i, p) in phases.iter_mut().enumerate() {
            let dot: f64 = xi.iter().zip(freqs.point(i)).map(|(x, a)| x * a).sum();
            *p = turn(-dot);
        }
        for i in 0..n {
            let left = phases[i] * w;
            for j in i..n {
                acc[i * n + j] += left * phases[j].conj();
            }
        }
    }
    let matrix = HermitianMatrix::from_upper(n, |i, j| acc[i * n + j]);
    Ok(GramMatrix {
        matrix,
        labels: GramLabels::Frequencies(freqs.clone()),
        provenance: Provenance::Quadrature,
    })
}

/// Extreme eigenvalues of the Gram as Riesz-bound estimates of the truncation.
pub fn riesz_bounds(gram: &GramMatrix) -> Result<BoundsReport> {
    let b = eigen_bounds(&gram.matrix)?;
    Ok(BoundsReport::from_eigen(b.lambda_min, b.lambda_max, b.residual, BoundsVerdict::RieszBasis))
}

/// Orthonormality of the truncated system: `max |G - I| <= tol`.
pub fn is_orthonormal_system(gram: &GramMatrix, tol: f64) -> OrthonormalCheck {
    let max_deviation = gram.matrix.deviation_from_identity();
    OrthonormalCheck {
        orthonormal: max_deviation <= tol,
        max_deviation,
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge { order, cap: MAX_ORDER })
    } else {
        Ok(())
    }
}

fn check_dimension(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
