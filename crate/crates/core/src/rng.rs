//! Counter-based random streams.
//!
//! Every stochastic operation takes a [`StreamKey`] `(seed, stream)`. The key
//! selects a ChaCha8 keystream: the 256-bit key is expanded from `seed` by
//! `SeedableRng::seed_from_u64` (PCG32 expansion), and `stream` is the 64-bit
//! ChaCha stream id. Substreams are derived by hashing a child index into the
//! stream id, so work split into substreams gives the same numbers no matter
//! how the substreams are scheduled.
//!
//! Uniforms use the top 53 bits of a `u64`. Standard normals use the basic
//! Box-Muller transform; both outputs of a pair are used, in the order
//! `r·cos(2πu₂)`, `r·sin(2πu₂)` with `r = sqrt(-2 ln u₁)` and `u₁ ∈ (0, 1]`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub stream: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Derives the key of the `index`-th substream.
    pub fn child(self, index: u64) -> Self {
        let stream = splitmix64(self.stream ^ splitmix64(index.wrapping_add(GOLDEN_GAMMA)));
        Self {
            seed: self.seed,
            stream,
        }
    }

    /// Derives a substream from a textual label, e.g. an experiment name.
    pub fn labeled(self, label: &str) -> Self {
        // FNV-1a; stable across platforms and releases.
        let h = label.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
        });
        self.child(h)
    }
}

pub struct RngStream {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(key: StreamKey) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(key.seed);
        inner.set_stream(key.stream);
        Self {
            inner,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open0().ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * self.uniform()).sin_cos();
        self.spare_normal = Some(r * s);
        r * c
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = self.standard_normal());
    }
}
