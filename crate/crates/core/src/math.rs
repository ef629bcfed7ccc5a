//! Scalar helpers routed through `libm` so results do not depend on the
//! platform math library.

use core::f64::consts::PI;

use num_complex::Complex64;

/// `exp(2 pi i x)`, with `x` reduced to `[-1/2, 1/2]` before the trig call.
pub(crate) fn turn(x: f64) -> Complex64 {
    let r = x - libm::round(x);
    let theta = 2.0 * PI * r;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

pub(crate) fn modulus(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `sin(pi x)`, exactly zero at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = libm::round(x);
    let f = x - n;
    let s = libm::sin(PI * f);
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Normalized sinc, `sin(pi x) / (pi x)`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        sin_pi(x) / (PI * x)
    }
}

pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}
