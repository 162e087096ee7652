//! Singular kernels and the weights of the random hyperplane-arrangement ensemble.
//!
//! The ensemble draws a height `h ~ p_H`, then a `(d+1)×h` Gaussian matrix,
//! and weights each draw by `α(h) = π^q · p_H(h)^{-1} · (-1)^h·binom(q, h)`.
//! Given `h`, two points at angle `a` share a cell with probability
//! `(1 - a/π)^h`, so the kernel is the binomial series
//! `π^q Σ_h binom(q, h)(a/π - 1)^h = a^q`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A value in `[0, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelValue {
    Finite(f64),
    Infinite,
}

impl KernelValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, KernelValue::Infinite)
    }

    /// As an `f64`, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match *self {
            KernelValue::Finite(v) => v,
            KernelValue::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            KernelValue::Finite(v) => Some(v),
            KernelValue::Infinite => None,
        }
    }

    fn from_power(base: f64, exponent: f64) -> Self {
        let v = base.powf(exponent);
        if v.is_finite() {
            KernelValue::Finite(v)
        } else {
            KernelValue::Infinite
        }
    }
}

impl std::ops::Add for KernelValue {
    type Output = KernelValue;

    fn add(self, rhs: KernelValue) -> KernelValue {
        match (self, rhs) {
            (KernelValue::Finite(a), KernelValue::Finite(b)) => KernelValue::Finite(a + b),
            _ => KernelValue::Infinite,
        }
    }
}

/// Probability mass function of the number of hyperplanes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HeightPmf {
    /// `p(h) = (1 - ratio)·ratio^h`.
    Geometric { ratio: f64 },
}

impl HeightPmf {
    pub fn geometric(ratio: f64) -> Result<Self> {
        let pmf = HeightPmf::Geometric { ratio };
        pmf.validate()?;
        Ok(pmf)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            HeightPmf::Geometric { ratio } if ratio > 0.0 && ratio < 1.0 => Ok(()),
            HeightPmf::Geometric { ratio } => Err(Error::invalid(format!(
                "geometric pmf ratio must lie in (0, 1), got {ratio}"
            ))),
        }
    }

    pub fn pmf(&self, h: usize) -> f64 {
        match *self {
            HeightPmf::Geometric { ratio } => (1.0 - ratio) * int_pow(ratio, h),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            HeightPmf::Geometric { ratio } => ratio / (1.0 - ratio),
        }
    }

    /// Inverse-CDF draw: `floor(ln U / ln ratio)` with `U ∈ (0, 1]`.
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        match *self {
            HeightPmf::Geometric { ratio } => {
                let h = (rng.uniform_open0().ln() / ratio.ln()).floor();
                // P(h > 2^20) is astronomically small for any usable ratio.
                h.min((1u64 << 20) as f64) as usize
            }
        }
    }
}

/// The weighted random partition built from random hyperplane arrangements on `S^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrpConfig {
    /// Kernel exponent, strictly negative.
    pub q: f64,
    pub pmf: HeightPmf,
    /// Sphere dimension.
    pub d: usize,
}

impl WrpConfig {
    pub fn new(q: f64, pmf: HeightPmf, d: usize) -> Result<Self> {
        let cfg = Self { q, pmf, d };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn geometric(q: f64, ratio: f64, d: usize) -> Result<Self> {
        Self::new(q, HeightPmf::geometric(ratio)?, d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q < 0.0 && self.q.is_finite()) {
            return Err(Error::invalid(format!(
                "kernel exponent q must be negative, got {}",
                self.q
            )));
        }
        if self.d == 0 {
            return Err(Error::invalid("sphere dimension must be at least 1"));
        }
        self.pmf.validate()
    }
}

/// `dist^{-d}`, or `+∞` at `dist = 0`.
pub fn manifold_hilbert_kernel(dist: f64, d: usize) -> Result<KernelValue> {
    if !(dist >= 0.0) {
        return Err(Error::invalid(format!(
            "distance must be nonnegative, got {dist}"
        )));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if dist == 0.0 {
        return Ok(KernelValue::Infinite);
    }
    Ok(KernelValue::from_power(dist, -(d as f64)))
}

/// `binom(q, h) = (1/h!) Π_{j<h} (q - j)`, accumulated one factor at a time.
pub fn generalized_binomial(q: f64, h: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..h {
        acc = acc * (q - j as f64) / (j + 1) as f64;
    }
    acc
}

/// `(-1)^h·binom(q, h)`, which is positive for `q < 0`.
pub fn signed_binomial(q: f64, h: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..h {
        acc = acc * (j as f64 - q) / (j + 1) as f64;
    }
    acc
}

/// Ensemble weight `α(h) = π^q · p_H(h)^{-1} · (-1)^h·binom(q, h)`.
pub fn wrp_weight(cfg: &WrpConfig, h: usize) -> f64 {
    PI.powf(cfg.q) / cfg.pmf.pmf(h) * signed_binomial(cfg.q, h)
}

/// Lazily grown table of [`wrp_weight`] values.
#[derive(Debug, Clone)]
pub struct WeightTable {
    cfg: WrpConfig,
    weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(cfg: WrpConfig) -> Self {
        Self {
            cfg,
            weights: Vec::new(),
        }
    }

    pub fn get(&mut self, h: usize) -> f64 {
        while self.weights.len() <= h {
            let next = wrp_weight(&self.cfg, self.weights.len());
            self.weights.push(next);
        }
        self.weights[h]
    }
}

/// `base^n` by binary exponentiation with explicit multiplies, so the result
/// does not depend on how the compiler lowers `powi`.
pub(crate) fn int_pow(base: f64, mut n: usize) -> f64 {
    let (mut acc, mut b) = (1.0, base);
    while n > 0 {
        if n & 1 == 1 {
            acc *= b;
        }
        b *= b;
        n >>= 1;
    }
    acc
}

fn check_angle(angle: f64) -> Result<()> {
    if (0.0..=PI).contains(&angle) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "angle must lie in [0, π], got {angle}"
        )))
    }
}

/// `angle^q`, or `+∞` at `angle = 0`.
pub fn wrp_kernel_closed_form(angle: f64, cfg: &WrpConfig) -> Result<KernelValue> {
    check_angle(angle)?;
    if angle == 0.0 {
        return Ok(KernelValue::Infinite);
    }
    Ok(KernelValue::from_power(angle, cfg.q))
}

pub const SERIES_DEFAULT_TERMS: usize = 400;

/// A first omitted term above this fraction of the partial sum marks the sum as truncated.
pub const SERIES_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub partial_sum: f64,
    pub truncated: bool,
}

/// Partial sums `π^q Σ_{h ≤ H} (-1)^h binom(q,h)(1 - φ)^h` for `H = 0..=h_max`.
///
/// Every term is nonnegative, so the sequence is nondecreasing.
pub fn wrp_kernel_partial_sums(angle: f64, cfg: &WrpConfig, h_max: usize) -> Result<Vec<f64>> {
    check_angle(angle)?;
    if angle == 0.0 {
        return Err(Error::invalid(
            "the series diverges at angle 0; use the closed form, which is +∞ there",
        ));
    }
    let t = 1.0 - angle / PI;
    let scale = PI.powf(cfg.q);
    let mut out = Vec::with_capacity(h_max + 1);
    let (mut coef, mut power, mut sum) = (1.0, 1.0, 0.0);
    for h in 0..=h_max {
        if h > 0 {
            coef = coef * ((h - 1) as f64 - cfg.q) / h as f64;
            power *= t;
        }
        sum += coef * power;
        out.push(scale * sum);
    }
    Ok(out)
}

/// Partial sum through `h_max`; `truncated` is set when the first omitted
/// term exceeds [`SERIES_TAIL_TOLERANCE`] times the partial sum.
pub fn wrp_kernel_series(angle: f64, cfg: &WrpConfig, h_max: usize) -> Result<SeriesSum> {
    let sums = wrp_kernel_partial_sums(angle, cfg, h_max + 1)?;
    let (last, next) = (sums[h_max], sums[h_max + 1]);
    Ok(SeriesSum {
        partial_sum: last,
        truncated: next - last > SERIES_TAIL_TOLERANCE * last,
    })
}

/// Probability `(1 - angle/π)^h` that `h` Gaussian hyperplanes do not separate two points.
pub fn same_cell_probability(angle: f64, h: usize) -> Result<f64> {
    check_angle(angle)?;
    Ok(int_pow(1.0 - angle / PI, h))
}
