//! Kernel smoothing with singular power-law kernels.
//!
//! The regressor has three branches: a query that coincides with training
//! points returns their label, otherwise the kernel-weighted mean of the
//! labels, and 0 if every weight vanishes. Weights are evaluated relative to
//! the nearest training point, `(dᵢ/δ)^q`, so the common factor `δ^q` never
//! overflows. Contributions are summed in order of `(distance, label)`, which
//! makes the estimate independent of the dataset order.

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::geometry::{Manifold, Sphere};
use crate::kernels::{manifold_hilbert_kernel, wrp_kernel_closed_form, KernelValue, WrpConfig};
use crate::partitions::COINCIDENCE_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `dist^{-d}` with `d` the manifold dimension.
    ManifoldHilbert { d: usize },
    /// `angle^q`, the closed form of the hyperplane-arrangement ensemble.
    WrpClosedForm(WrpConfig),
    /// `dist^q` for an arbitrary `q < 0`.
    PowerLaw { q: f64 },
}

impl KernelKind {
    pub fn exponent(&self) -> f64 {
        match *self {
            KernelKind::ManifoldHilbert { d } => -(d as f64),
            KernelKind::WrpClosedForm(cfg) => cfg.q,
            KernelKind::PowerLaw { q } => q,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<M> {
    kind: KernelKind,
    manifold: M,
}

impl<M: Manifold> KernelSpec<M> {
    pub fn manifold_hilbert(manifold: M) -> Result<Self> {
        let d = manifold.dim();
        if d == 0 {
            return Err(Error::invalid("manifold dimension must be at least 1"));
        }
        Ok(Self {
            kind: KernelKind::ManifoldHilbert { d },
            manifold,
        })
    }

    pub fn power_law(manifold: M, q: f64) -> Result<Self> {
        if !(q < 0.0 && q.is_finite()) {
            return Err(Error::invalid(format!(
                "singular kernels need a negative exponent, got {q}"
            )));
        }
        Ok(Self {
            kind: KernelKind::PowerLaw { q },
            manifold,
        })
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn manifold(&self) -> &M {
        &self.manifold
    }

    pub fn evaluate(&self, dist: f64) -> Result<KernelValue> {
        match self.kind {
            KernelKind::ManifoldHilbert { d } => manifold_hilbert_kernel(dist, d),
            KernelKind::WrpClosedForm(cfg) => wrp_kernel_closed_form(dist, &cfg),
            KernelKind::PowerLaw { q } => {
                if !(dist >= 0.0) {
                    return Err(Error::invalid(format!(
                        "distance must be nonnegative, got {dist}"
                    )));
                }
                let v = dist.powf(q);
                Ok(if v.is_finite() {
                    KernelValue::Finite(v)
                } else {
                    KernelValue::Infinite
                })
            }
        }
    }
}

impl KernelSpec<Sphere> {
    /// The ensemble kernel `angle^q` on `S^d`.
    pub fn wrp(cfg: WrpConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            kind: KernelKind::WrpClosedForm(cfg),
            manifold: Sphere { d: cfg.d },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Interpolation,
    Ratio,
    ZeroDenominator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionEstimate {
    pub value: f64,
    pub branch: Branch,
}

/// `+1` for nonnegative input, `-1` otherwise.
pub fn sgn(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum()
}

/// Distances from `x` to the training points, and the indices of coincident ones.
struct Neighbourhood {
    dists: Vec<f64>,
    coincident: Vec<usize>,
}

fn neighbourhood<M: Manifold>(
    x: &M::Point,
    data: &LabeledDataset<M::Point>,
    k: &KernelSpec<M>,
) -> Result<Neighbourhood> {
    data.require_nonempty()?;
    let dists = data
        .points()
        .iter()
        .map(|p| k.manifold.distance(x, p))
        .collect::<Result<Vec<_>>>()?;
    let coincident = dists
        .iter()
        .enumerate()
        .filter(|(_, &d)| d <= COINCIDENCE_TOLERANCE)
        .map(|(i, _)| i)
        .collect();
    Ok(Neighbourhood { dists, coincident })
}

fn coincident_mean(n: &Neighbourhood, labels: &[f64]) -> f64 {
    let mut ys: Vec<f64> = n.coincident.iter().map(|&i| labels[i]).collect();
    if ys.len() == 1 {
        return ys[0];
    }
    sorted_sum(&mut ys) / ys.len() as f64
}

/// `(weight, label)` pairs with weights `(dᵢ/δ)^q`, sorted by `(distance, label)`.
fn relative_weights(dists: &[f64], labels: &[f64], q: f64) -> Vec<(f64, f64)> {
    let nearest = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let mut pairs: Vec<(f64, f64)> = dists.iter().copied().zip(labels.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs
        .into_iter()
        .map(|(d, y)| ((d / nearest).powf(q), y))
        .collect()
}

/// The kernel smoothing estimate at `x`.
pub fn kernel_smooth_regress<M: Manifold>(
    x: &M::Point,
    data: &LabeledDataset<M::Point>,
    k: &KernelSpec<M>,
) -> Result<RegressionEstimate> {
    let n = neighbourhood(x, data, k)?;
    if !n.coincident.is_empty() {
        return Ok(RegressionEstimate {
            value: coincident_mean(&n, data.labels()),
            branch: Branch::Interpolation,
        });
    }
    let pairs = relative_weights(&n.dists, data.labels(), k.kind.exponent());
    let (mut num, mut den) = (0.0, 0.0);
    for &(w, y) in &pairs {
        num += w * y;
        den += w;
    }
    if !(den > 0.0) {
        return Ok(RegressionEstimate {
            value: 0.0,
            branch: Branch::ZeroDenominator,
        });
    }
    let (lo, hi) = data
        .labels()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
            (lo.min(y), hi.max(y))
        });
    Ok(RegressionEstimate {
        value: (num / den).clamp(lo, hi),
        branch: Branch::Ratio,
    })
}

/// The margin `Σᵢ Yᵢ·K(x, Xᵢ)` at a query distinct from every training point.
pub fn kernel_margin<M: Manifold>(
    x: &M::Point,
    data: &LabeledDataset<M::Point>,
    k: &KernelSpec<M>,
) -> Result<f64> {
    let n = neighbourhood(x, data, k)?;
    if let Some(&index) = n.coincident.first() {
        return Err(Error::CoincidentQuery { index });
    }
    let mut pairs: Vec<(f64, f64)> = n
        .dists
        .iter()
        .copied()
        .zip(data.labels().iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut sum = 0.0;
    for (d, y) in pairs {
        sum += y * k.evaluate(d)?.value();
    }
    Ok(sum)
}

/// `sgn(Σᵢ Yᵢ·K(x, Xᵢ))` in extended arithmetic.
///
/// Infinite terms from coincident training points dominate; their sign is the
/// sign of the mean coincident label. `sgn(0) = +1`.
pub fn ensemble_classify<M: Manifold>(
    x: &M::Point,
    data: &LabeledDataset<M::Point>,
    k: &KernelSpec<M>,
) -> Result<f64> {
    let n = neighbourhood(x, data, k)?;
    if !n.coincident.is_empty() {
        return Ok(sgn(coincident_mean(&n, data.labels())));
    }
    let margin: f64 = relative_weights(&n.dists, data.labels(), k.kind.exponent())
        .into_iter()
        .map(|(w, y)| w * y)
        .sum();
    Ok(sgn(margin))
}

/// `Σᵢ wᵢ·|m̂ᵢ - mᵢ|`, a quadrature of the L1 error.
pub fn l1_error_estimate(estimates: &[f64], truth: &[f64], weights: &[f64]) -> Result<f64> {
    if estimates.len() != truth.len() || truth.len() != weights.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} estimates, {} truths, {} weights",
            estimates.len(),
            truth.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::invalid("weights must be nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if !weights.is_empty() && (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "weights must sum to 1, got {total}"
        )));
    }
    Ok(estimates
        .iter()
        .zip(truth)
        .zip(weights)
        .map(|((m, t), w)| w * (m - t).abs())
        .sum())
}
