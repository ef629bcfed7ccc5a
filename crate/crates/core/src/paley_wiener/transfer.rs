use alloc::vec::Vec;

use crate::domain::Domain;
use crate::spectra::{exp_gram, quadrature_gram, riesz_bounds, BoundsReport, FrequencySet, GramMatrix, Provenance};
use crate::tolerance::{SANDWICH, SUPPORT_THRESHOLD, UNIT_MEASURE};
use crate::{Error, HypothesisCheck, Result};

use super::weight::{SpectralWeight, WeightProfile, EXACT_AGREEMENT};

/// Gram of `{phi(. - a)}_{a in A}`; by Parseval this is the exponential Gram
/// weighted by `|phi^|^2`.
pub fn translation_gram(domain: &Domain, freqs: &FrequencySet, weight: &SpectralWeight) -> Result<GramMatrix> {
    exp_gram(domain, freqs, Some(weight))
}

/// Bound transfer between `{e_a}` and `{phi(. - a)}` on one truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    /// `C1, C2` of the exponentials.
    pub exp_bounds: BoundsReport,
    /// `C1', C2'` of the translates.
    pub trans_bounds: BoundsReport,
    /// `inf |phi^|` and `sup |phi^|` used for the prediction.
    pub inf_mod: f64,
    pub sup_mod: f64,
    /// `C1 inf^2`.
    pub predicted_lower: f64,
    /// `C2 sup^2`.
    pub predicted_upper: f64,
    pub sandwich_holds: bool,
    /// `C1' - C1 inf^2`.
    pub lower_margin: f64,
    /// `C2 sup^2 - C2'`.
    pub upper_margin: f64,
    /// `C1 >= C1' / sup^2` and `C2 <= C2' / inf^2`.
    pub converse_holds: bool,
    pub route: Provenance,
    pub hypotheses: Vec<HypothesisCheck>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.sandwich_holds && self.converse_holds
    }
}

/// `C1 inf^2 <= C1'` and `C2' <= C2 sup^2`, checked with relative slack
/// [`SANDWICH`], together with the reverse inequalities.
///
/// Both Grams are built on the same route: closed form with exact moduli
/// when the weight has a polynomial `|phi^|^2` and `Omega` is a union of
/// boxes, otherwise quadrature on the weight's nodes with node moduli.
pub fn verify_riesz_transfer(domain: &Domain, freqs: &FrequencySet, weight: &SpectralWeight) -> Result<TransferReport> {
    if weight.domain() != domain {
        return Err(Error::IncompatibleWeight);
    }
    let closed = domain.has_boxes() && weight.squared_modulus_form().is_some();
    let (inf_mod, sup_mod) = match (closed, weight.exact_moduli()) {
        (true, Some(e)) => (e.inf, e.sup),
        _ => (weight.inf_mod(), weight.sup_mod()),
    };
    if !weight.fully_supported() || inf_mod <= SUPPORT_THRESHOLD {
        return Err(Error::VanishingWeight { inf_mod });
    }

    let (g_exp, g_phi) = if closed {
        (exp_gram(domain, freqs, None)?, exp_gram(domain, freqs, Some(weight))?)
    } else {
        (
            quadrature_gram(weight.rule(), freqs, None)?,
            quadrature_gram(weight.rule(), freqs, Some(&weight.density()))?,
        )
    };
    let exp_bounds = riesz_bounds(&g_exp)?;
    let trans_bounds = riesz_bounds(&g_phi)?;

    let (inf2, sup2) = (inf_mod * inf_mod, sup_mod * sup_mod);
    let predicted_lower = exp_bounds.lower * inf2;
    let predicted_upper = exp_bounds.upper * sup2;
    let sandwich_holds = trans_bounds.lower >= predicted_lower * (1.0 - SANDWICH)
        && trans_bounds.upper <= predicted_upper * (1.0 + SANDWICH);
    let converse_holds = exp_bounds.lower >= trans_bounds.lower / sup2 * (1.0 - SANDWICH)
        && exp_bounds.upper <= trans_bounds.upper / inf2 * (1.0 + SANDWICH);

    Ok(TransferReport {
        exp_bounds,
        trans_bounds,
        inf_mod,
        sup_mod,
        predicted_lower,
        predicted_upper,
        sandwich_holds,
        lower_margin: trans_bounds.lower - predicted_lower,
        upper_margin: predicted_upper - trans_bounds.upper,
        converse_holds,
        route: if closed { Provenance::ClosedForm } else { Provenance::Quadrature },
        hypotheses: weight_hypotheses(domain, weight, inf_mod, sup_mod),
    })
}

pub(crate) fn weight_hypotheses(domain: &Domain, weight: &SpectralWeight, inf_mod: f64, sup_mod: f64) -> Vec<HypothesisCheck> {
    let mut checks = alloc::vec![
        HypothesisCheck::new("weight bounded below", inf_mod > SUPPORT_THRESHOLD, inf_mod, SUPPORT_THRESHOLD),
        HypothesisCheck::new("weight bounded above", sup_mod.is_finite(), sup_mod, f64::INFINITY),
        HypothesisCheck::new("weight nowhere zero", weight.fully_supported(), weight.support_fraction(), 1.0),
    ];
    if let Some(gap) = weight.node_exact_disagreement() {
        checks.push(HypothesisCheck::new("node moduli match exact moduli", gap <= EXACT_AGREEMENT, gap, EXACT_AGREEMENT));
    }
    if weight.profile() == &WeightProfile::Indicator {
        let gap = libm::fabs(domain.measure() - 1.0);
        checks.push(HypothesisCheck::new("unit measure", gap <= UNIT_MEASURE, domain.measure(), UNIT_MEASURE));
    }
    checks
}
