use alloc::vec::Vec;

use num_complex::Complex64;

use crate::domain::{Domain, QuadratureRule};
use crate::math::turn;
use crate::{Error, Result};

/// `f` in `PW_Omega`, represented by samples of `f^` on the midpoint nodes
/// of `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedSignal {
    domain: Domain,
    rule: QuadratureRule,
    coefficients: Vec<Complex64>,
}

impl BandlimitedSignal {
    pub fn new(domain: &Domain, nodes_per_axis: usize, coefficients: Vec<Complex64>) -> Result<Self> {
        let rule = domain.quadrature(nodes_per_axis)?;
        if coefficients.len() != rule.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "signal has {} samples, the rule has {} nodes",
                coefficients.len(),
                rule.len()
            )));
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidArgument("signal samples must be finite".into()));
        }
        Ok(Self {
            domain: domain.clone(),
            rule,
            coefficients,
        })
    }

    pub fn from_fn(domain: &Domain, nodes_per_axis: usize, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let rule = domain.quadrature(nodes_per_axis)?;
        let coefficients = (0..rule.len()).map(|k| f(rule.node(k))).collect();
        Self::new(domain, nodes_per_axis, coefficients)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `||f||^2 = sum_k w_k |f^_k|^2` (Plancherel).
    pub fn norm_sq(&self) -> f64 {
        self.rule
            .weights()
            .iter()
            .zip(&self.coefficients)
            .map(|(w, c)| w * c.norm_sqr())
            .sum()
    }

    /// `f(x) = sum_k w_k f^_k exp(2 pi i <x, xi_k>)`.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        (0..self.rule.len())
            .map(|k| {
                let dot: f64 = x.iter().zip(self.rule.node(k)).map(|(a, b)| a * b).sum();
                self.coefficients[k] * turn(dot) * self.rule.weights()[k]
            })
            .sum()
    }
}
