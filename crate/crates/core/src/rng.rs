//! Seeded random source for instance generation.
//!
//! Generator: ChaCha8 (the `rand_chacha` 0.9 stream cipher RNG). The 32-byte
//! key is derived from the `(kind, n, seed)` tuple by a splitmix64 chain, so
//! every instance kind and size draws from an independent stream and a file
//! written on one platform regenerates bit-identically on another.
//!
//! Uniform reals use the top 53 bits of a `u64` draw. Normal variates use the
//! basic Box–Muller transform, consuming two uniforms per pair and
//! caching the second variate.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Version tag of the stream layout above. Bump on any change.
pub const RNG_VERSION: &str = "chacha8-splitmix64-boxmuller/1";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct InstanceRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl InstanceRng {
    pub fn new(kind: &str, n: usize, seed: u64) -> Self {
        let mut state = 0u64;
        for &b in kind.as_bytes() {
            state ^= b as u64;
            splitmix64(&mut state);
        }
        state ^= n as u64;
        splitmix64(&mut state);
        state ^= seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self {
            inner: ChaCha8Rng::from_seed(key),
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound), unbiased by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1].
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * phi.sin());
        r * phi.cos()
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
