//! Vector-valued Gabor systems `G_{a,b}(alpha) = e_b(alpha) T_a u` in
//! `L^2(Omega, PW_Omega)`, where shifts and modulations share the index set
//! `A`. Their Gram is the Kronecker product of the exponential Gram and the
//! translation Gram, and that product is how it is assembled here.

use alloc::vec::Vec;

use crate::domain::Domain;
use crate::numerics::{kron_product, kron_residual};
use crate::paley_wiener::{translation_gram, SpectralWeight, WeightProfile};
use crate::spectra::{exp_gram, is_orthonormal_system, FrequencySet, GramLabels, GramMatrix};
use crate::tolerance::{MAX_ORDER, SUPPORT_THRESHOLD, UNIT_MEASURE};
use crate::{Error, HypothesisCheck, Result};

/// Caveat attached to every basis check.
pub const TRUNCATION_NOTE: &str =
    "finite truncation: the check certifies Gram identities in both directions, not completeness";

#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    domain: Domain,
    freqs: FrequencySet,
    window: SpectralWeight,
}

impl GaborSystem {
    /// `window` is `u^` sampled on `domain`; the Gram has order `|A|^2`.
    pub fn new(domain: &Domain, freqs: &FrequencySet, window: &SpectralWeight) -> Result<Self> {
        let order = freqs.len() * freqs.len();
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge { order, cap: MAX_ORDER });
        }
        if window.domain() != domain {
            return Err(Error::IncompatibleWeight);
        }
        if freqs.dimension() != domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: domain.dimension(),
                found: freqs.dimension(),
            });
        }
        Ok(Self {
            domain: domain.clone(),
            freqs: freqs.clone(),
            window: window.clone(),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn freqs(&self) -> &FrequencySet {
        &self.freqs
    }

    pub fn window(&self) -> &SpectralWeight {
        &self.window
    }

    pub fn exp_gram(&self) -> Result<GramMatrix> {
        exp_gram(&self.domain, &self.freqs, None)
    }

    pub fn translation_gram(&self) -> Result<GramMatrix> {
        translation_gram(&self.domain, &self.freqs, &self.window)
    }
}

/// `<G_{a,b}, G_{a',b'}> = <e_b, e_b'>_{L^2(Omega)} <T_a u, T_a' u>`.
///
/// Row `ib * |A| + ia` belongs to the pair `(a, b) = (A[ia], A[ib])`, so
/// the matrix is `exp_gram (x) translation_gram` in the index convention of
/// [`kron_product`].
pub fn gabor_gram(system: &GaborSystem) -> Result<GramMatrix> {
    let e = system.exp_gram()?;
    let t = system.translation_gram()?;
    let n = system.freqs.len();
    let pairs = (0..n * n).map(|row| (row % n, row / n)).collect();
    Ok(GramMatrix {
        matrix: kron_product(&e.matrix, &t.matrix),
        labels: GramLabels::Pairs {
            freqs: system.freqs.clone(),
            pairs,
        },
        provenance: t.provenance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VvOnbReport {
    pub translates_onb: bool,
    pub gabor_onb: bool,
    /// `{e_a}` orthonormal on `Omega`, needed to pass from translates to
    /// the Gabor system.
    pub exponentials_onb: bool,
    pub equivalent: bool,
    /// Translates and exponentials orthonormal imply the Gabor system is.
    pub lemma_direction_holds: bool,
    pub translate_deviation: f64,
    pub gabor_deviation: f64,
    pub exp_deviation: f64,
    pub kron_residual: f64,
    pub hypotheses: Vec<HypothesisCheck>,
    pub note: &'static str,
}

/// Orthonormality of `{T_a u}` against that of the Gabor system, with the
/// hypotheses `|Omega| = 1` and `u^` nowhere zero reported alongside.
pub fn vv_onb_check(system: &GaborSystem, tol: f64) -> Result<VvOnbReport> {
    let e = system.exp_gram()?;
    let t = system.translation_gram()?;
    let g = gabor_gram(system)?;
    let te = is_orthonormal_system(&t, tol);
    let ge = is_orthonormal_system(&g, tol);
    let ee = is_orthonormal_system(&e, tol);
    let kron = kron_residual(&g.matrix, &e.matrix, &t.matrix)?;

    let w = &system.window;
    let measure_gap = libm::fabs(system.domain.measure() - 1.0);
    let mut hypotheses = alloc::vec![
        HypothesisCheck::new("unit measure", measure_gap <= UNIT_MEASURE, system.domain.measure(), UNIT_MEASURE),
        HypothesisCheck::new(
            "window nowhere zero",
            w.fully_supported() && w.inf_mod() > SUPPORT_THRESHOLD,
            w.inf_mod(),
            SUPPORT_THRESHOLD,
        ),
    ];
    if w.profile() == &WeightProfile::Indicator {
        hypotheses.push(HypothesisCheck::new("window unimodular", true, 1.0, 0.0));
    }

    Ok(VvOnbReport {
        translates_onb: te.orthonormal,
        gabor_onb: ge.orthonormal,
        exponentials_onb: ee.orthonormal,
        equivalent: te.orthonormal == ge.orthonormal,
        lemma_direction_holds: !(te.orthonormal && ee.orthonormal) || ge.orthonormal,
        translate_deviation: te.max_deviation,
        gabor_deviation: ge.max_deviation,
        exp_deviation: ee.max_deviation,
        kron_residual: kron,
        hypotheses,
        note: TRUNCATION_NOTE,
    })
}
