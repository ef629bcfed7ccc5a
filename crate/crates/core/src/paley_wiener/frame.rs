use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::domain::Domain;
use crate::math::{sqrt, turn};
use crate::numerics::{eigen_bounds, HermitianMatrix};
use crate::spectra::{BoundsReport, BoundsVerdict, FrequencySet};
use crate::tolerance::{MAX_ORDER, RELATIVE, SANDWICH};
use crate::{Error, HypothesisCheck, Result};

use super::transfer::weight_hypotheses;
use super::weight::SpectralWeight;

/// Statement of what the frame check certifies.
pub const SUPPORT_CAVEAT: &str = "frame bounds hold on PW(E_phi) only: functions with Fourier support in Omega \\ E_phi are orthogonal to every translate";

/// Space on which the frame bounds were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameSpace {
    /// Frame operator on the span of the `E_phi` nodes; used when there are
    /// no more support nodes than frequencies.
    SupportNodes,
    /// Gram of the system, whose nonzero spectrum equals that of the frame
    /// operator on the span of the system.
    SystemSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameTransferReport {
    pub space: FrameSpace,
    pub support_nodes: usize,
    pub total_nodes: usize,
    pub support_fraction: f64,
    /// `m = inf |phi^|^2` over `E_phi`.
    pub m: f64,
    /// `M = sup |phi^|^2`.
    pub big_m: f64,
    /// `C1, C2` of the unweighted exponentials on `E_phi`.
    pub exp_bounds: BoundsReport,
    /// Bounds of `{phi^ e_a}`.
    pub frame_bounds: BoundsReport,
    /// `m C1`.
    pub predicted_lower: f64,
    /// `M C2`.
    pub predicted_upper: f64,
    pub sandwich_holds: bool,
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub converse_holds: bool,
    pub parseval_unweighted: bool,
    pub parseval_weighted: bool,
    /// `E_phi` is a proper subset of the nodes of `Omega`.
    pub support_is_proper: bool,
    pub caveat: &'static str,
    pub hypotheses: Vec<HypothesisCheck>,
}

impl FrameTransferReport {
    pub fn passed(&self) -> bool {
        self.sandwich_holds && self.converse_holds
    }
}

/// `m C1 <= frame lower` and `frame upper <= M C2` for `{phi^ e_a}` against
/// `{e_a}`, both restricted to the support nodes `E_phi`.
pub fn verify_frame_transfer(domain: &Domain, freqs: &FrequencySet, weight: &SpectralWeight) -> Result<FrameTransferReport> {
    if weight.domain() != domain {
        return Err(Error::IncompatibleWeight);
    }
    if freqs.dimension() != domain.dimension() {
        return Err(Error::DimensionMismatch {
            expected: domain.dimension(),
            found: freqs.dimension(),
        });
    }
    let rule = weight.rule();
    let nodes: Vec<usize> = (0..rule.len()).filter(|&k| weight.support()[k]).collect();
    if nodes.is_empty() {
        return Err(Error::EmptySupport);
    }
    let inf_mod = weight.inf_mod();
    let sup_mod = weight.sup_mod();
    let (m, big_m) = (inf_mod * inf_mod, sup_mod * sup_mod);

    // Rows: frequencies; columns: support nodes. g_a[k] = sqrt(w_k) e_a(xi_k).
    let n = freqs.len();
    let k = nodes.len();
    let mut plain = vec![Complex64::new(0.0, 0.0); n * k];
    for (col, &node) in nodes.iter().enumerate() {
        let xi = rule.node(node);
        let root = sqrt(rule.weights()[node]);
        for a in 0..n {
            let dot: f64 = xi.iter().zip(freqs.point(a)).map(|(x, y)| x * y).sum();
            plain[a * k + col] = turn(-dot) * root;
        }
    }
    let phi: Vec<Complex64> = nodes.iter().map(|&node| weight.values()[node]).collect();

    let space = if k <= n { FrameSpace::SupportNodes } else { FrameSpace::SystemSpan };
    let order = if space == FrameSpace::SupportNodes { k } else { n };
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
    }
    let (s_plain, s_phi) = match space {
        // S[k, l] = sum_a g_a[k] conj(g_a[l]); the weighted operator is D S D*.
        FrameSpace::SupportNodes => {
            let s = HermitianMatrix::from_upper(k, |r, c| (0..n).map(|a| plain[a * k + r] * plain[a * k + c].conj()).sum());
            let sw = HermitianMatrix::from_upper(k, |r, c| phi[r] * s.get(r, c) * phi[c].conj());
            (s, sw)
        }
        // G[a, a'] = sum_k rho_k g_a[k] conj(g_a'[k]).
        FrameSpace::SystemSpan => {
            let gram = |rho: &dyn Fn(usize) -> f64| {
                HermitianMatrix::from_upper(n, |a, b| {
                    (0..k).map(|c| plain[a * k + c] * plain[b * k + c].conj() * rho(c)).sum()
                })
            };
            (gram(&|_| 1.0), gram(&|c| phi[c].norm_sqr()))
        }
    };
    let eb = eigen_bounds(&s_plain)?;
    let fb = eigen_bounds(&s_phi)?;
    let exp_bounds = BoundsReport::from_eigen(eb.lambda_min, eb.lambda_max, eb.residual, BoundsVerdict::FrameOnlyNotTested);
    let frame_bounds = BoundsReport::from_eigen(fb.lambda_min, fb.lambda_max, fb.residual, BoundsVerdict::FrameOnlyNotTested);

    let predicted_lower = m * exp_bounds.lower;
    let predicted_upper = big_m * exp_bounds.upper;
    let sandwich_holds = frame_bounds.lower >= predicted_lower * (1.0 - SANDWICH)
        && frame_bounds.upper <= predicted_upper * (1.0 + SANDWICH);
    let converse_holds = exp_bounds.lower >= frame_bounds.lower / big_m * (1.0 - SANDWICH)
        && exp_bounds.upper <= frame_bounds.upper / m * (1.0 + SANDWICH);
    let parseval = |b: &BoundsReport| b.upper - b.lower <= RELATIVE * b.upper;

    let mut hypotheses = weight_hypotheses(domain, weight, inf_mod, sup_mod);
    // The frame statement needs only a positive infimum on the support.
    hypotheses.retain(|h| h.name != "weight nowhere zero");
    hypotheses.push(HypothesisCheck::new("support nonempty", true, weight.support_fraction(), 0.0));

    Ok(FrameTransferReport {
        space,
        support_nodes: k,
        total_nodes: rule.len(),
        support_fraction: weight.support_fraction(),
        m,
        big_m,
        exp_bounds,
        frame_bounds,
        predicted_lower,
        predicted_upper,
        sandwich_holds,
        lower_margin: frame_bounds.lower - predicted_lower,
        upper_margin: predicted_upper - frame_bounds.upper,
        converse_holds,
        parseval_unweighted: parseval(&exp_bounds),
        parseval_weighted: parseval(&frame_bounds),
        support_is_proper: k < rule.len(),
        caveat: SUPPORT_CAVEAT,
        hypotheses,
    })
}
