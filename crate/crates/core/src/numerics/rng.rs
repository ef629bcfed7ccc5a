use core::f64::consts::PI;

use rand_core::Rng;
use rand_pcg::Pcg32;

/// Stream selector passed to [`Pcg32::new`]; the PCG reference default.
pub const STREAM: u64 = 0xa02b_dbf7_bb3c_0a7;

/// Deterministic pseudorandom stream.
///
/// PCG-XSH-RR 64/32: 64-bit LCG state advanced as
/// `state = state * 6364136223846793005 + (2 * STREAM + 1)`, each 32-bit
/// output permuted by an xorshift-high and a random rotation. The seed is
/// the initial state. 64-bit outputs concatenate two draws (low word
/// first), so a given seed yields the same stream on every platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: Pcg32,
}

pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::new(seed)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Pcg32::new(seed, STREAM),
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.inner.next_u32());
        let hi = u64::from(self.inner.next_u32());
        (hi << 32) | lo
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        // Lemire's multiply-shift with rejection.
        let n64 = n as u64;
        let threshold = n64.wrapping_neg() % n64;
        loop {
            let x = self.next_u64();
            let m = u128::from(x) * u128::from(n64);
            if (m as u64) >= threshold {
                return (m >> 64) as usize;
            }
        }
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
