//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a [`Stream`] addressed by
//! `(seed, purpose, index)`. A stream is a ChaCha12 keystream whose key is
//! derived from `(seed, purpose)` and whose 64-bit stream id is `index`, so
//! sample `i` of a Monte Carlo loop is a pure function of its address and
//! work can be split over any number of threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Independent families of streams sharing one user seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    /// Symbol sequences (Bernoulli words).
    Word,
    /// Initial frames for QR deflation.
    Frame,
    /// Random matrices for perturbations and probe directions.
    Perturbation,
    /// Random return words for group sampling.
    ReturnWord,
    /// Free-form tag for callers (test suites, examples).
    Custom(u64),
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Word => 0x574f_5244,
            Purpose::Frame => 0x4652_414d,
            Purpose::Perturbation => 0x5045_5254,
            Purpose::ReturnWord => 0x5245_5457,
            Purpose::Custom(x) => splitmix64(x ^ 0x4355_5354_0000_0000),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub struct Stream {
    rng: ChaCha12Rng,
}

impl Stream {
    pub fn new(seed: u64, purpose: Purpose, index: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = splitmix64(seed) ^ purpose.tag();
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(index);
        Self { rng }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
