use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::domain::AxisBox;
use crate::numerics::HermitianMatrix;
use crate::oscillatory::QuadraticForm;
use crate::{Error, Result};

/// `sup |P - 1|` at or below this value passes.
pub const PERIODIZATION_TOLERANCE: f64 = 1e-8;

/// One factor of a separable window `u^(x) = amplitude * prod_j f_j(x_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisWindow {
    /// `chi_[lo, hi)`.
    Indicator { lo: f64, hi: f64 },
    /// Tent rising from 0 at `lo` to 1 at the midpoint and back to 0 at `hi`.
    Hat { lo: f64, hi: f64 },
    /// Square root of the tent.
    SqrtHat { lo: f64, hi: f64 },
    /// Not compactly supported; rejected.
    Gaussian { center: f64, width: f64 },
}

impl AxisWindow {
    fn support(&self) -> Result<(f64, f64)> {
        let (lo, hi) = match *self {
            AxisWindow::Indicator { lo, hi } | AxisWindow::Hat { lo, hi } | AxisWindow::SqrtHat { lo, hi } => (lo, hi),
            AxisWindow::Gaussian { .. } => return Err(Error::NonCompactProfile),
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument("window support needs lo < hi".into()));
        }
        Ok((lo, hi))
    }

    /// `|f(t)|^2`.
    fn squared(&self, t: f64) -> f64 {
        match *self {
            AxisWindow::Indicator { lo, hi } => {
                if t >= lo && t < hi {
                    1.0
                } else {
                    0.0
                }
            }
            AxisWindow::Hat { lo, hi } => {
                let h = tent(lo, hi, t);
                h * h
            }
            AxisWindow::SqrtHat { lo, hi } => tent(lo, hi, t),
            AxisWindow::Gaussian { .. } => unreachable!("rejected before evaluation"),
        }
    }

    /// `sum_{k in Z} |f(t + k)|^2`.
    fn periodized(&self, lo: f64, hi: f64, t: f64) -> f64 {
        let first = libm::floor(lo - t) as i64;
        let last = libm::ceil(hi - t) as i64;
        (first..=last).map(|k| self.squared(t + k as f64)).sum()
    }

    /// `\int |f(t)|^2 e^{-2 pi i k t} dt`, exact: `|f|^2` is piecewise
    /// polynomial of degree at most two.
    fn squared_fourier(&self, k: f64) -> Complex64 {
        let piece = |l: f64, u: f64, form: QuadraticForm| form.box_integral(&AxisBox::interval(l, u).unwrap(), &[k]);
        match *self {
            AxisWindow::Indicator { lo, hi } => piece(lo, hi, QuadraticForm::constant(1, 1.0)),
            AxisWindow::Hat { lo, hi } | AxisWindow::SqrtHat { lo, hi } => {
                let r = 0.5 * (hi - lo);
                let mid = lo + r;
                // Rising side (t - lo) / r, falling side (hi - t) / r.
                let (rise, fall) = match self {
                    AxisWindow::Hat { .. } => (
                        QuadraticForm::squared_affine(-lo / r, &[1.0 / r]),
                        QuadraticForm::squared_affine(hi / r, &[-1.0 / r]),
                    ),
                    _ => (
                        QuadraticForm::affine(-lo / r, &[1.0 / r]),
                        QuadraticForm::affine(hi / r, &[-1.0 / r]),
                    ),
                };
                piece(lo, mid, rise) + piece(mid, hi, fall)
            }
            AxisWindow::Gaussian { .. } => unreachable!("rejected before evaluation"),
        }
    }
}

fn tent(lo: f64, hi: f64, t: f64) -> f64 {
    let r = 0.5 * (hi - lo);
    let c = lo + r;
    (1.0 - libm::fabs(t - c) / r).max(0.0)
}

/// Separable window `u^(x) = amplitude * prod_j axes[j](x_j)` on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowProfile {
    pub axes: Vec<AxisWindow>,
    pub amplitude: f64,
}

impl WindowProfile {
    pub fn new(axes: Vec<AxisWindow>, amplitude: f64) -> Self {
        Self { axes, amplitude }
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizationReport {
    pub resolution: usize,
    /// `P` on the grid `i / resolution` of `[0, 1)^d`, last axis fastest.
    pub values: Vec<f64>,
    pub max_deviation: f64,
    pub verdict: bool,
    /// Translates `k` with `|k_j| <= translate_radius` in the cross-check.
    pub translate_radius: usize,
    /// `max |G - I|` for the Gram of integer translates of `u`.
    pub gram_deviation: f64,
    pub gram_orthonormal: bool,
    pub agrees: bool,
}

/// `P(x) = sum_{j in Z^d} |u^(x + j)|^2` on a grid of `[0, 1)^d`, with the
/// verdict `sup |P - 1| <= 1e-8`, cross-checked against the Gram of the
/// integer translates `{u(. - k)}`, whose entries are the Fourier
/// coefficients of `|u^|^2`.
pub fn zd_periodization(profile: &WindowProfile, resolution: usize, translate_radius: usize) -> Result<PeriodizationReport> {
    let d = profile.dimension();
    if d == 0 {
        return Err(Error::InvalidArgument("profile needs at least one axis".into()));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if !profile.amplitude.is_finite() {
        return Err(Error::InvalidArgument("amplitude must be finite".into()));
    }
    let supports: Vec<(f64, f64)> = profile.axes.iter().map(AxisWindow::support).collect::<Result<_>>()?;
    let side = 2 * translate_radius + 1;
    let order = side.pow(d as u32);
    if order > crate::tolerance::MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            cap: crate::tolerance::MAX_ORDER,
        });
    }
    let amp2 = profile.amplitude * profile.amplitude;

    // Separable: P is a product of per-axis periodizations.
    let per_axis: Vec<Vec<f64>> = profile
        .axes
        .iter()
        .zip(&supports)
        .map(|(axis, &(lo, hi))| {
            (0..resolution)
                .map(|i| axis.periodized(lo, hi, i as f64 / resolution as f64))
                .collect()
        })
        .collect();
    let total = resolution.pow(d as u32);
    let mut values = Vec::with_capacity(total);
    let mut index = vec![0usize; d];
    for _ in 0..total {
        values.push(amp2 * (0..d).map(|j| per_axis[j][index[j]]).product::<f64>());
        for j in (0..d).rev() {
            index[j] += 1;
            if index[j] < resolution {
                break;
            }
            index[j] = 0;
        }
    }
    let max_deviation = values.iter().map(|p| libm::fabs(p - 1.0)).fold(0.0, f64::max);
    let verdict = max_deviation <= PERIODIZATION_TOLERANCE;

    // G[k, k'] = amp^2 prod_j c_j(k_j - k'_j).
    let radius = translate_radius as i64;
    let coefficients: Vec<Vec<Complex64>> = profile
        .axes
        .iter()
        .map(|axis| (-2 * radius..=2 * radius).map(|m| axis.squared_fourier(m as f64)).collect())
        .collect();
    let digits = |mut flat: usize| {
        let mut out = vec![0i64; d];
        for j in (0..d).rev() {
            out[j] = (flat % side) as i64 - radius;
            flat /= side;
        }
        out
    };
    let gram = HermitianMatrix::from_upper(order, |r, c| {
        let (kr, kc) = (digits(r), digits(c));
        (0..d)
            .map(|j| coefficients[j][(kr[j] - kc[j] + 2 * radius) as usize])
            .product::<Complex64>()
            * amp2
    });
    let gram_deviation = gram.deviation_from_identity();
    let gram_orthonormal = gram_deviation <= PERIODIZATION_TOLERANCE;

    Ok(PeriodizationReport {
        resolution,
        values,
        max_deviation,
        verdict,
        translate_radius,
        gram_deviation,
        gram_orthonormal,
        agrees: verdict == gram_orthonormal,
    })
}

/// The ten reference windows exercised by the tests, CLI demo and
/// acceptance suite, with the expected verdict.
pub fn reference_profiles() -> Vec<(&'static str, WindowProfile, bool)> {
    use AxisWindow::*;
    let half = core::f64::consts::FRAC_1_SQRT_2;
    vec![
        ("unit indicator", WindowProfile::new(vec![Indicator { lo: 0.0, hi: 1.0 }], 1.0), true),
        ("half indicator", WindowProfile::new(vec![Indicator { lo: 0.0, hi: 0.5 }], 1.0), false),
        ("hat on [0, 2]", WindowProfile::new(vec![Hat { lo: 0.0, hi: 2.0 }], 1.0), false),
        ("square-root hat on [0, 2]", WindowProfile::new(vec![SqrtHat { lo: 0.0, hi: 2.0 }], 1.0), true),
        ("shifted unit indicator", WindowProfile::new(vec![Indicator { lo: 0.3, hi: 1.3 }], 1.0), true),
        ("scaled unit indicator", WindowProfile::new(vec![Indicator { lo: 0.0, hi: 1.0 }], 0.5), false),
        ("normalized double indicator", WindowProfile::new(vec![Indicator { lo: 0.0, hi: 2.0 }], half), true),
        (
            "unit square",
            WindowProfile::new(vec![Indicator { lo: 0.0, hi: 1.0 }, Indicator { lo: 0.0, hi: 1.0 }], 1.0),
            true,
        ),
        (
            "half square",
            WindowProfile::new(vec![Indicator { lo: 0.0, hi: 1.0 }, Indicator { lo: 0.0, hi: 0.5 }], 1.0),
            false,
        ),
        (
            "centered times normalized double",
            WindowProfile::new(vec![Indicator { lo: -0.5, hi: 0.5 }, Indicator { lo: 0.0, hi: 2.0 }], half),
            true,
        ),
    ]
}
