use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::sinc;
use crate::tolerance::MAX_ORDER;
use crate::{Error, Result};

use super::signal::BandlimitedSignal;

/// `Omega` must match `[-1/2, 1/2]` this closely.
const BAND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ShannonReport {
    pub truncation: usize,
    /// `f(n)` for `n = -N..=N`.
    pub samples: Vec<Complex64>,
    /// `sum_{|n| <= N} f(n) sinc(x - n)` at each evaluation point.
    pub reconstruction: Vec<Complex64>,
    /// `sum_{|n| <= N} |f(n)|^2`.
    pub coefficient_energy: f64,
    /// `||f||^2`.
    pub signal_energy: f64,
    /// `||f||^2 - sum_{|n| <= N} |f(n)|^2`, the energy outside the truncation.
    pub tail_energy: f64,
}

/// Truncated sinc series of a signal band-limited to `[-1/2, 1/2]`.
///
/// Samples come from the signal's own quadrature, so the rule needs at
/// least `2N + 1` nodes; below that the sampled sequence aliases.
pub fn shannon_reconstruct(signal: &BandlimitedSignal, truncation: usize, eval_points: &[f64]) -> Result<ShannonReport> {
    let d = signal.domain();
    let boxes = d.covering_boxes();
    let on_band = d.dimension() == 1
        && boxes.len() == 1
        && libm::fabs(boxes[0].lower()[0] + 0.5) <= BAND_TOLERANCE
        && libm::fabs(boxes[0].upper()[0] - 0.5) <= BAND_TOLERANCE;
    if !on_band {
        return Err(Error::WrongBand);
    }
    if truncation > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: truncation,
            cap: MAX_ORDER,
        });
    }
    if signal.rule().len() < 2 * truncation + 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "truncation {truncation} needs at least {} quadrature nodes, the signal has {}",
            2 * truncation + 1,
            signal.rule().len()
        )));
    }
    let n = truncation as i64;
    let samples: Vec<Complex64> = (-n..=n).map(|k| signal.evaluate(&[k as f64])).collect();
    let reconstruction = eval_points
        .iter()
        .map(|&x| {
            (-n..=n)
                .zip(&samples)
                .map(|(k, s)| s * sinc(x - k as f64))
                .sum()
        })
        .collect();
    let coefficient_energy: f64 = samples.iter().map(|s| s.norm_sqr()).sum();
    let signal_energy = signal.norm_sq();
    Ok(ShannonReport {
        truncation,
        samples,
        reconstruction,
        coefficient_energy,
        signal_energy,
        tail_energy: signal_energy - coefficient_energy,
    })
}
