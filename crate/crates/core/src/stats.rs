//! Streaming moments and the chunked Monte Carlo driver.
//!
//! A run of `n` samples is cut into chunks of [`CHUNK_SAMPLES`]; chunk `c`
//! draws from substream `key.child(c)`. Chunks may run on any number of
//! threads, but their moments are merged in chunk order, so results are
//! bitwise identical regardless of the worker count.

use crate::rng::{RngStream, StreamKey};

pub const CHUNK_SAMPLES: usize = 4096;

/// Count, mean and centered sum of squares (Welford), mergeable with
/// Chan et al.'s pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count = n;
    }

    /// Unbiased sample variance; 0 with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate {
            mean: self.mean,
            stderr: (self.variance() / self.count.max(1) as f64).sqrt(),
            n: self.count,
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        iter.into_iter().for_each(|x| m.push(x));
        m
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl McEstimate {
    /// `(mean - target) / stderr`; 0 when both the error and the stderr vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.mean - target;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Runs `n` samples of a `width`-dimensional statistic and returns per-component moments.
///
/// `make_sampler` is called once per chunk; the sampler it returns writes one
/// sample into its output slice per call.
pub fn sample_moments<F, G>(n: usize, key: StreamKey, width: usize, make_sampler: F) -> Vec<Moments>
where
    F: Fn() -> G + Sync,
    G: FnMut(&mut RngStream, &mut [f64]),
{
    let chunks = n.div_ceil(CHUNK_SAMPLES);
    let run_chunk = |c: usize| {
        let len = CHUNK_SAMPLES.min(n - c * CHUNK_SAMPLES);
        let mut rng = RngStream::new(key.child(c as u64));
        let mut sampler = make_sampler();
        let mut out = vec![0.0; width];
        let mut acc = vec![Moments::default(); width];
        for _ in 0..len {
            sampler(&mut rng, &mut out);
            acc.iter_mut().zip(&out).for_each(|(m, &x)| m.push(x));
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let partials: Vec<Vec<Moments>> = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run_chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Vec<Moments>> = (0..chunks).map(run_chunk).collect();

    let mut total = vec![Moments::default(); width];
    for part in &partials {
        total.iter_mut().zip(part).for_each(|(t, p)| t.merge(p));
    }
    total
}

/// Scalar form of [`sample_moments`].
pub fn sample_scalar<F, G>(n: usize, key: StreamKey, make_sampler: F) -> McEstimate
where
    F: Fn() -> G + Sync,
    G: FnMut(&mut RngStream) -> f64,
{
    let wrapped = || {
        let mut inner = make_sampler();
        move |rng: &mut RngStream, out: &mut [f64]| out[0] = inner(rng)
    };
    sample_moments(n, key, 1, wrapped)[0].estimate()
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}
