use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::sqrt;
use crate::tolerance::SUPPORT_THRESHOLD;
use crate::{Error, HypothesisCheck, Result};

use super::signal::BandlimitedSignal;
use super::weight::SpectralWeight;

/// Slack on `||g^|| <= ||f^|| / inf |psi^|`.
pub const NORM_BOUND_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    /// `||g^ psi^ - f^|| / ||f^||`, 0 for `f = 0`.
    pub residual: f64,
    pub signal_norm: f64,
    /// `||g^||` with `g^ = f^ / psi^`.
    pub factor_norm: f64,
    /// `||f^|| / inf |psi^|`.
    pub norm_bound: f64,
    pub bound_holds: bool,
    pub hypotheses: Vec<HypothesisCheck>,
}

/// Writes `f = g * psi` on the nodes: `g^ = f^ / psi^`, then measures how
/// well `g^ psi^` reproduces `f^` and checks `||g^|| <= ||f^|| / inf |psi^|`.
pub fn convolution_factorization_check(psi: &SpectralWeight, signal: &BandlimitedSignal) -> Result<FactorizationReport> {
    if psi.domain() != signal.domain() || psi.rule() != signal.rule() {
        return Err(Error::IncompatibleWeight);
    }
    let inf_mod = psi.inf_mod();
    if !psi.fully_supported() || inf_mod <= SUPPORT_THRESHOLD {
        return Err(Error::VanishingWeight { inf_mod });
    }
    let weights = signal.rule().weights();
    let f = signal.coefficients();
    let g: Vec<Complex64> = f.iter().zip(psi.values()).map(|(a, b)| a / b).collect();
    let mut defect = 0.0;
    let mut g_sq = 0.0;
    for k in 0..f.len() {
        defect += weights[k] * (g[k] * psi.values()[k] - f[k]).norm_sqr();
        g_sq += weights[k] * g[k].norm_sqr();
    }
    let signal_norm = sqrt(signal.norm_sq());
    let factor_norm = sqrt(g_sq);
    let residual = if signal_norm == 0.0 { 0.0 } else { sqrt(defect) / signal_norm };
    let norm_bound = signal_norm / inf_mod;
    Ok(FactorizationReport {
        residual,
        signal_norm,
        factor_norm,
        norm_bound,
        bound_holds: factor_norm <= norm_bound * (1.0 + NORM_BOUND_SLACK),
        hypotheses: alloc::vec![
            HypothesisCheck::new("weight bounded below", true, inf_mod, SUPPORT_THRESHOLD),
            HypothesisCheck::new("weight nowhere zero", true, psi.support_fraction(), 1.0),
        ],
    })
}
