use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::domain::{Domain, QuadratureRule};
use crate::math::{exp, modulus};
use crate::oscillatory::QuadraticForm;
use crate::tolerance::SUPPORT_THRESHOLD;
use crate::{Error, Result};

/// Node and exact moduli further apart than this are flagged.
pub const EXACT_AGREEMENT: f64 = 1e-9;

/// Named shape of `phi^` on `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightProfile {
    /// `phi^ = 1` on `Omega`.
    Indicator,
    Constant(Complex64),
    /// `phi^(xi) = offset + slope . xi`, real.
    Affine { offset: f64, slope: Vec<f64> },
    /// `exp(-steepness / (x (1 - x)))` on `(0, 1)`, zero elsewhere.
    Bump { steepness: f64 },
    /// Explicit node samples.
    Table,
}

/// Infimum and supremum of `|phi^|` over `Omega`, computed analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactModuli {
    pub inf: f64,
    pub sup: f64,
}

/// `phi^` sampled on the midpoint nodes of `Omega`, with its support
/// `E_phi = {|phi^| > 1e-12}` and the moduli `inf_{E_phi} |phi^|`,
/// `sup |phi^|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWeight {
    domain: Domain,
    profile: WeightProfile,
    factor: Complex64,
    rule: QuadratureRule,
    values: Vec<Complex64>,
    support: Vec<bool>,
    inf_mod: f64,
    sup_mod: f64,
    exact: Option<ExactModuli>,
    warnings: Vec<String>,
}

impl SpectralWeight {
    pub fn indicator(domain: &Domain, nodes_per_axis: usize) -> Result<Self> {
        Self::build(domain, nodes_per_axis, WeightProfile::Indicator, |_| Complex64::new(1.0, 0.0))
    }

    pub fn constant(domain: &Domain, value: Complex64, nodes_per_axis: usize) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidArgument("weight value must be finite".into()));
        }
        Self::build(domain, nodes_per_axis, WeightProfile::Constant(value), |_| value)
    }

    pub fn affine(domain: &Domain, offset: f64, slope: Vec<f64>, nodes_per_axis: usize) -> Result<Self> {
        if slope.len() != domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: domain.dimension(),
                found: slope.len(),
            });
        }
        if !offset.is_finite() || slope.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("affine coefficients must be finite".into()));
        }
        let eval = affine_evaluator(offset, slope.clone());
        Self::build(domain, nodes_per_axis, WeightProfile::Affine { offset, slope }, eval)
    }

    /// Explicit samples in the node order of `domain.quadrature(nodes_per_axis)`.
    pub fn from_table(domain: &Domain, nodes_per_axis: usize, values: Vec<Complex64>) -> Result<Self> {
        let rule = domain.quadrature(nodes_per_axis)?;
        if values.len() != rule.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "table has {} samples, the rule has {} nodes",
                values.len(),
                rule.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("table samples must be finite".into()));
        }
        Ok(Self::assemble(domain.clone(), WeightProfile::Table, rule, values))
    }

    /// Samples an arbitrary function; the result is a table profile.
    pub fn from_fn(domain: &Domain, nodes_per_axis: usize, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let rule = domain.quadrature(nodes_per_axis)?;
        let values = (0..rule.len()).map(|k| f(rule.node(k))).collect();
        Self::from_table(domain, nodes_per_axis, values)
    }

    fn build(
        domain: &Domain,
        nodes_per_axis: usize,
        profile: WeightProfile,
        eval: impl Fn(&[f64]) -> Complex64,
    ) -> Result<Self> {
        let rule = domain.quadrature(nodes_per_axis)?;
        let values = (0..rule.len()).map(|k| eval(rule.node(k))).collect();
        Ok(Self::assemble(domain.clone(), profile, rule, values))
    }

    fn assemble(domain: Domain, profile: WeightProfile, rule: QuadratureRule, values: Vec<Complex64>) -> Self {
        let mut weight = Self {
            domain,
            profile,
            factor: Complex64::new(1.0, 0.0),
            rule,
            values,
            support: Vec::new(),
            inf_mod: 0.0,
            sup_mod: 0.0,
            exact: None,
            warnings: Vec::new(),
        };
        weight.refresh();
        weight
    }

    fn refresh(&mut self) {
        let moduli: Vec<f64> = self.values.iter().map(|&v| modulus(v)).collect();
        self.support = moduli.iter().map(|&m| m > SUPPORT_THRESHOLD).collect();
        self.sup_mod = moduli.iter().copied().fold(0.0, f64::max);
        self.inf_mod = moduli
            .iter()
            .zip(&self.support)
            .filter(|(_, &s)| s)
            .map(|(&m, _)| m)
            .fold(f64::INFINITY, f64::min);
        if !self.inf_mod.is_finite() {
            self.inf_mod = 0.0;
        }
        let scale = modulus(self.factor);
        self.exact = exact_moduli(&self.domain, &self.profile).map(|e| ExactModuli {
            inf: e.inf * scale,
            sup: e.sup * scale,
        });
    }

    /// `c * phi^`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.factor *= c;
        for v in &mut out.values {
            *v *= c;
        }
        out.refresh();
        out.warnings = self.warnings.clone();
        out
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `E_phi` node mask.
    pub fn support(&self) -> &[bool] {
        &self.support
    }

    /// `inf |phi^|` over the support nodes; 0 when the support is empty.
    pub fn inf_mod(&self) -> f64 {
        self.inf_mod
    }

    pub fn sup_mod(&self) -> f64 {
        self.sup_mod
    }

    pub fn exact_moduli(&self) -> Option<ExactModuli> {
        self.exact
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn support_count(&self) -> usize {
        self.support.iter().filter(|&&s| s).count()
    }

    pub fn support_fraction(&self) -> f64 {
        self.support_count() as f64 / self.support.len() as f64
    }

    pub fn fully_supported(&self) -> bool {
        self.support.iter().all(|&s| s)
    }

    /// `|phi^|^2` at every node.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Largest gap between node-sampled and exact moduli, if exact ones exist.
    pub fn node_exact_disagreement(&self) -> Option<f64> {
        self.exact
            .map(|e| libm::fabs(e.inf - self.inf_mod).max(libm::fabs(e.sup - self.sup_mod)))
    }

    /// `|phi^|^2` as a polynomial of degree at most two, for the profiles
    /// whose weighted Gram has a closed form.
    pub(crate) fn squared_modulus_form(&self) -> Option<QuadraticForm> {
        let d = self.domain.dimension();
        let base = match &self.profile {
            WeightProfile::Indicator => QuadraticForm::constant(d, 1.0),
            WeightProfile::Constant(c) => QuadraticForm::constant(d, c.norm_sqr()),
            WeightProfile::Affine { offset, slope } => QuadraticForm::squared_affine(*offset, slope),
            WeightProfile::Bump { .. } | WeightProfile::Table => return None,
        };
        Some(base.scaled(self.factor.norm_sqr()))
    }
}

fn affine_evaluator(offset: f64, slope: Vec<f64>) -> impl Fn(&[f64]) -> Complex64 {
    move |x| Complex64::new(offset + x.iter().zip(&slope).map(|(a, b)| a * b).sum::<f64>(), 0.0)
}

fn bump(steepness: f64, x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        exp(-steepness / (x * (1.0 - x)))
    }
}

fn exact_moduli(domain: &Domain, profile: &WeightProfile) -> Option<ExactModuli> {
    match profile {
        WeightProfile::Indicator => Some(ExactModuli { inf: 1.0, sup: 1.0 }),
        WeightProfile::Constant(c) => {
            let m = modulus(*c);
            Some(ExactModuli { inf: m, sup: m })
        }
        WeightProfile::Affine { offset, slope } => {
            let (mut inf, mut sup) = (f64::INFINITY, 0.0_f64);
            for b in domain.covering_boxes() {
                // An affine function attains its extremes at box corners.
                let d = b.dimension();
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for corner in 0..(1usize << d) {
                    let v = offset
                        + (0..d)
                            .map(|j| {
                                let x = if corner >> j & 1 == 1 { b.upper()[j] } else { b.lower()[j] };
                                slope[j] * x
                            })
                            .sum::<f64>();
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                let box_inf = if lo <= 0.0 && hi >= 0.0 {
                    0.0
                } else {
                    libm::fabs(lo).min(libm::fabs(hi))
                };
                inf = inf.min(box_inf);
                sup = sup.max(libm::fabs(lo).max(libm::fabs(hi)));
            }
            Some(ExactModuli { inf, sup })
        }
        WeightProfile::Bump { steepness } => {
            // Increasing on [0, 1/2], decreasing on [1/2, 1].
            let (mut inf, mut sup) = (f64::INFINITY, 0.0_f64);
            for b in domain.covering_boxes() {
                let (l, u) = (b.lower()[0], b.upper()[0]);
                inf = inf.min(bump(*steepness, l).min(bump(*steepness, u)));
                sup = sup.max(bump(*steepness, 0.5_f64.clamp(l, u)));
            }
            Some(ExactModuli { inf, sup })
        }
        WeightProfile::Table => None,
    }
}

/// `phi^ = u * chi_Omega` with `u(x) = exp(-steepness / (x (1 - x)))` on
/// `(0, 1)` and `u = 0` outside.
///
/// `Omega` must be one-dimensional and inside `[0, 1]`. Where `Omega`
/// touches an endpoint, `u` decays below the support threshold and the
/// affected nodes drop out of `E_phi`; both facts are recorded as warnings.
pub fn bump_window(omega: &Domain, steepness: f64, nodes_per_axis: usize) -> Result<SpectralWeight> {
    if !(steepness.is_finite() && steepness > 0.0) {
        return Err(Error::NonPositive("steepness"));
    }
    if omega.dimension() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: omega.dimension(),
        });
    }
    let boxes = omega.covering_boxes();
    if boxes.iter().any(|b| b.lower()[0] < 0.0 || b.upper()[0] > 1.0) {
        return Err(Error::OutsideUnitInterval);
    }
    let mut weight = SpectralWeight::build(
        omega,
        nodes_per_axis,
        WeightProfile::Bump { steepness },
        |x| Complex64::new(bump(steepness, x[0]), 0.0),
    )?;
    if boxes.iter().any(|b| b.lower()[0] == 0.0 || b.upper()[0] == 1.0) {
        weight
            .warnings
            .push("domain touches 0 or 1 where the bump vanishes; inf over the domain is 0".into());
    }
    let trimmed = weight.support.len() - weight.support_count();
    if trimmed > 0 {
        weight.warnings.push(alloc::format!(
            "{trimmed} of {} nodes have |u| <= 1e-12 and are excluded from the support",
            weight.support.len()
        ));
    }
    if weight.support_count() == 0 {
        return Err(Error::EmptySupport);
    }
    Ok(weight)
}
