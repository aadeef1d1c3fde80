//! Numerical building blocks shared by the analysis modules.

pub mod expm;
pub mod fft;
pub mod levelset;
pub mod quad;
pub mod roots;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic uniform samples on `[lo, hi)` from a seed.
pub struct Uniform {
    rng: ChaCha8Rng,
}

impl Uniform {
    pub fn new(seed: u64) -> Self {
        Uniform { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn sample(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        lo + (hi - lo) * u
    }
}

/// `x mod m` in `[0, m)`.
pub fn wrap(x: f64, m: f64) -> f64 {
    let r = x % m;
    let r = if r < 0.0 { r + m } else { r };
    if r >= m {
        0.0
    } else {
        r
    }
}
