//! Hyperplane-arrangement partitions of `S^d` and their Monte Carlo ensemble.
//!
//! An arrangement `W ∈ R^{(d+1)×h}` sends `x` to the sign pattern of `Wᵀx`
//! (with `sgn(0) = +1`); points with equal patterns share a cell. `h = 0` is
//! the trivial partition `{S^d}`.
//!
//! # Variance
//!
//! For two points at normalized angle `φ`, the second moment of the weighted
//! indicator `α(θ)·1{same cell}` is
//! `π^{2q} Σ_h p_H(h)^{-1}·binom(q,h)²·(1-φ)^h`. With a geometric height
//! distribution of ratio `r` this is finite iff `r > 1 - φ`; callers choose
//! `r` (or restrict angles) accordingly, see [`variance_is_finite`].

use crate::dataset::LabeledDataset;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{dot, geodesic_distance, SpherePoint};
use crate::kernels::{HeightPmf, WeightTable, WrpConfig};
use crate::rng::{RngStream, StreamKey};
use crate::stats::{sample_moments, sample_scalar, McEstimate};

/// Queries closer than this (in angle) to a training point are treated as coincident.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

/// `(d+1)×h` matrix of hyperplane normals, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneArrangement {
    d: usize,
    h: usize,
    normals: Vec<f64>,
}

impl HyperplaneArrangement {
    pub fn trivial(d: usize) -> Self {
        Self {
            d,
            h: 0,
            normals: Vec::new(),
        }
    }

    pub fn from_columns(d: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut normals = Vec::with_capacity(columns.len() * (d + 1));
        for c in columns {
            check_dim(d + 1, c.len())?;
            normals.extend_from_slice(c);
        }
        Ok(Self {
            d,
            h: columns.len(),
            normals,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of hyperplanes.
    pub fn height(&self) -> usize {
        self.h
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.normals.chunks_exact(self.d + 1)
    }

    fn check_point(&self, x: &SpherePoint) -> Result<()> {
        check_dim(self.d, x.dim())
    }

    /// Redraws `h` columns of i.i.d. standard normals, reusing the allocation.
    fn resample(&mut self, h: usize, rng: &mut RngStream) {
        self.h = h;
        self.normals.resize(h * (self.d + 1), 0.0);
        rng.fill_normal(&mut self.normals);
    }

    /// Packs the pattern of `x` into `out` (bit `j` set iff `w_jᵀx ≥ 0`).
    fn pack_pattern(&self, x: &[f64], out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        for (j, col) in self.columns().enumerate() {
            if dot(col, x) >= 0.0 {
                out[j / 64] |= 1 << (j % 64);
            }
        }
    }

    fn words(&self) -> usize {
        self.h.div_ceil(64).max(1)
    }
}

/// Sign pattern of a point, one bit per hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellId {
    bits: Vec<u64>,
    len: usize,
}

impl CellId {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `true` for the nonnegative side of hyperplane `j`.
    pub fn sign(&self, j: usize) -> Option<bool> {
        (j < self.len).then(|| self.bits[j / 64] >> (j % 64) & 1 == 1)
    }
}

pub fn sign_pattern(w: &HyperplaneArrangement, x: &SpherePoint) -> Result<CellId> {
    w.check_point(x)?;
    let mut bits = vec![0; w.h.div_ceil(64)];
    if w.h > 0 {
        w.pack_pattern(x.coords(), &mut bits);
    }
    Ok(CellId { bits, len: w.h })
}

pub fn same_cell(w: &HyperplaneArrangement, x: &SpherePoint, z: &SpherePoint) -> Result<bool> {
    w.check_point(x)?;
    w.check_point(z)?;
    Ok(w.columns()
        .all(|col| (dot(col, x.coords()) >= 0.0) == (dot(col, z.coords()) >= 0.0)))
}

/// Histogram score `Σᵢ Yᵢ·1{Xᵢ in the cell of x}`.
///
/// The selected labels are summed in sorted order, so the result does not
/// depend on the order of the dataset.
pub fn histogram_score(
    x: &SpherePoint,
    data: &LabeledDataset<SpherePoint>,
    w: &HyperplaneArrangement,
) -> Result<f64> {
    data.require_nonempty()?;
    let mut selected = Vec::new();
    for (p, y) in data.iter() {
        if same_cell(w, x, p)? {
            selected.push(y);
        }
    }
    selected.sort_by(f64::total_cmp);
    Ok(selected.iter().sum())
}

/// Draws `h ~ p_H`, then a `(d+1)×h` matrix of i.i.d. standard normals.
pub fn sample_arrangement(cfg: &WrpConfig, rng: &mut RngStream) -> HyperplaneArrangement {
    let mut w = HyperplaneArrangement::trivial(cfg.d);
    let h = cfg.pmf.sample(rng);
    w.resample(h, rng);
    w
}

/// Draws an arrangement with a fixed number of hyperplanes.
pub fn sample_arrangement_with_height(
    d: usize,
    h: usize,
    rng: &mut RngStream,
) -> HyperplaneArrangement {
    let mut w = HyperplaneArrangement::trivial(d);
    w.resample(h, rng);
    w
}

/// Whether the weighted indicator at normalized angle `phi` has finite variance.
pub fn variance_is_finite(pmf: &HeightPmf, phi: f64) -> bool {
    match *pmf {
        HeightPmf::Geometric { ratio } => ratio > 1.0 - phi,
    }
}

/// Exact second moment of `α(θ)·1{same cell}` at angle `angle`, or `+∞`.
pub fn estimator_second_moment(cfg: &WrpConfig, angle: f64) -> f64 {
    let phi = angle / std::f64::consts::PI;
    if !variance_is_finite(&cfg.pmf, phi) {
        return f64::INFINITY;
    }
    let t = 1.0 - phi;
    let mut sum = 0.0;
    let mut coef = 1.0;
    let mut power = 1.0;
    for h in 0..100_000 {
        if h > 0 {
            coef = coef * ((h - 1) as f64 - cfg.q) / h as f64;
            power *= t;
        }
        let term = coef * coef * power / cfg.pmf.pmf(h);
        sum += term;
        if h > 10 && term <= 1e-17 * sum {
            break;
        }
    }
    std::f64::consts::PI.powf(2.0 * cfg.q) * sum
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::invalid(format!(
            "need at least 2 Monte Carlo samples, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Monte Carlo estimate of `E_θ[α(θ)·1{x, z share a cell of θ}]`.
///
/// Unbiased for `angle(x, z)^q` when `x ≠ z`. At `x = z` every indicator is
/// 1 and the mean grows without bound with `n_samples`.
pub fn mc_kernel_estimate(
    x: &SpherePoint,
    z: &SpherePoint,
    cfg: &WrpConfig,
    n_samples: usize,
    key: StreamKey,
) -> Result<McEstimate> {
    cfg.validate()?;
    check_dim(cfg.d, x.dim())?;
    check_dim(cfg.d, z.dim())?;
    check_samples(n_samples)?;
    let make = || {
        let mut weights = WeightTable::new(*cfg);
        let mut w = HyperplaneArrangement::trivial(cfg.d);
        move |rng: &mut RngStream| {
            let h = cfg.pmf.sample(rng);
            w.resample(h, rng);
            let together = w
                .columns()
                .all(|col| (dot(col, x.coords()) >= 0.0) == (dot(col, z.coords()) >= 0.0));
            if together {
                weights.get(h)
            } else {
                0.0
            }
        }
    };
    Ok(sample_scalar(n_samples, key, make))
}

/// Monte Carlo estimate of the ensemble margin `E_θ[α(θ)·Σᵢ Yᵢ·1{Xᵢ in the cell of x}]`.
pub fn mc_ensemble_margin(
    x: &SpherePoint,
    data: &LabeledDataset<SpherePoint>,
    cfg: &WrpConfig,
    n_samples: usize,
    key: StreamKey,
) -> Result<McEstimate> {
    Ok(mc_ensemble_margins(std::slice::from_ref(x), data, cfg, n_samples, key)?[0])
}

/// [`mc_ensemble_margin`] for many queries, sharing each sampled arrangement.
///
/// Each query's estimate is individually unbiased; estimates for different
/// queries are correlated.
pub fn mc_ensemble_margins(
    queries: &[SpherePoint],
    data: &LabeledDataset<SpherePoint>,
    cfg: &WrpConfig,
    n_samples: usize,
    key: StreamKey,
) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    data.require_nonempty()?;
    check_samples(n_samples)?;
    for p in data.points() {
        check_dim(cfg.d, p.dim())?;
    }
    for q in queries {
        check_dim(cfg.d, q.dim())?;
        for (i, p) in data.points().iter().enumerate() {
            if geodesic_distance(q, p)? <= COINCIDENCE_TOLERANCE {
                return Err(Error::CoincidentQuery { index: i });
            }
        }
    }
    let n_data = data.len();
    let make = || {
        let mut weights = WeightTable::new(*cfg);
        let mut w = HyperplaneArrangement::trivial(cfg.d);
        let mut data_bits: Vec<u64> = Vec::new();
        let mut query_bits: Vec<u64> = Vec::new();
        move |rng: &mut RngStream, out: &mut [f64]| {
            let h = cfg.pmf.sample(rng);
            w.resample(h, rng);
            let words = w.words();
            data_bits.resize(n_data * words, 0);
            query_bits.resize(words, 0);
            for (p, bits) in data.points().iter().zip(data_bits.chunks_exact_mut(words)) {
                w.pack_pattern(p.coords(), bits);
            }
            let alpha = weights.get(h);
            for (q, slot) in queries.iter().zip(out.iter_mut()) {
                w.pack_pattern(q.coords(), &mut query_bits);
                let score: f64 = data_bits
                    .chunks_exact(words)
                    .zip(data.labels())
                    .filter(|(bits, _)| *bits == query_bits.as_slice())
                    .map(|(_, y)| y)
                    .sum();
                *slot = alpha * score;
            }
        }
    };
    Ok(sample_moments(n_samples, key, queries.len(), make)
        .iter()
        .map(|m| m.estimate())
        .collect())
}

/// Cell of the regular grid partition of `[0,1]^d` into `n_grid^d` cubes.
///
/// Coordinate `1.0` falls in the last cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeCell(pub Vec<usize>);

pub fn cube_partition_cell(n_grid: usize, x: &[f64]) -> Result<CubeCell> {
    if n_grid == 0 {
        return Err(Error::invalid("grid resolution must be positive"));
    }
    x.iter()
        .map(|&c| {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::invalid(format!(
                    "coordinate {c} lies outside [0, 1]"
                )));
            }
            Ok(((n_grid as f64 * c).floor() as usize).min(n_grid - 1))
        })
        .collect::<Result<Vec<_>>>()
        .map(CubeCell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::wrp_kernel_closed_form;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(v: &[f64]) -> SpherePoint {
        SpherePoint::normalize(v.to_vec()).unwrap()
    }

    fn e3_column() -> HyperplaneArrangement {
        HyperplaneArrangement::from_columns(2, &[vec![0.0, 0.0, 1.0]]).unwrap()
    }

    #[test]
    fn sign_pattern_examples() {
        let trivial = HyperplaneArrangement::trivial(2);
        assert!(sign_pattern(&trivial, &p(&[1.0, 0.0, 0.0]))
            .unwrap()
            .is_empty());
        let w = e3_column();
        assert_eq!(
            sign_pattern(&w, &p(&[0.0, 0.0, 1.0])).unwrap().sign(0),
            Some(true)
        );
        assert_eq!(
            sign_pattern(&w, &p(&[0.0, 0.0, -1.0])).unwrap().sign(0),
            Some(false)
        );
        // sgn(0) = +1
        assert_eq!(
            sign_pattern(&w, &p(&[1.0, 0.0, 0.0])).unwrap().sign(0),
            Some(true)
        );
        assert!(sign_pattern(&w, &p(&[1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn same_cell_examples() {
        let w = e3_column();
        let north = p(&[0.3, 0.1, 0.9]);
        let south = p(&[0.2, -0.4, -0.5]);
        assert!(same_cell(&w, &north, &north).unwrap());
        assert!(same_cell(&HyperplaneArrangement::trivial(2), &north, &south).unwrap());
        assert!(!same_cell(&w, &north, &south).unwrap());
        assert!(!same_cell(&w, &south, &north).unwrap());
    }

    #[test]
    fn histogram_examples() {
        let x = p(&[0.0, 0.6, 0.8]);
        let single = LabeledDataset::new(vec![x.clone()], vec![1.0]).unwrap();
        let mut rng = RngStream::new(StreamKey::new(3, 0));
        let w = sample_arrangement_with_height(2, 5, &mut rng);
        assert_eq!(histogram_score(&x, &single, &w).unwrap(), 1.0);

        let pts = vec![
            p(&[1.0, 0.0, 0.1]),
            p(&[0.0, 1.0, 0.5]),
            p(&[0.0, 0.0, -1.0]),
        ];
        let three = LabeledDataset::new(pts, vec![1.0, 1.0, -1.0]).unwrap();
        let trivial = HyperplaneArrangement::trivial(2);
        assert_eq!(histogram_score(&x, &three, &trivial).unwrap(), 1.0);

        // One hyperplane z = 0: the query (north) sees the first two points only.
        assert_eq!(histogram_score(&x, &three, &e3_column()).unwrap(), 2.0);
        // Query in the south sees only the third.
        assert_eq!(
            histogram_score(&p(&[0.1, 0.1, -0.9]), &three, &e3_column()).unwrap(),
            -1.0
        );

        let empty = LabeledDataset::<SpherePoint>::new(vec![], vec![]).unwrap();
        assert!(matches!(
            histogram_score(&x, &empty, &trivial),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn sampled_arrangement_is_reproducible() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let a = sample_arrangement(&cfg, &mut RngStream::new(StreamKey::new(42, 0)));
        let b = sample_arrangement(&cfg, &mut RngStream::new(StreamKey::new(42, 0)));
        assert_eq!(a, b);
        assert_eq!(a.normals.len(), a.height() * 3);
    }

    #[test]
    fn antipodal_estimate_only_counts_the_trivial_partition() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let x = p(&[0.0, 0.0, 1.0]);
        let est =
            mc_kernel_estimate(&x, &x.antipode(), &cfg, 200_000, StreamKey::new(1, 1)).unwrap();
        let target = PI.powi(-2);
        assert!((est.mean - target).abs() <= 5.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn coincident_estimate_grows() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let x = p(&[0.0, 0.0, 1.0]);
        let small = mc_kernel_estimate(&x, &x, &cfg, 1_000, StreamKey::new(1, 2)).unwrap();
        let big = mc_kernel_estimate(&x, &x, &cfg, 200_000, StreamKey::new(1, 2)).unwrap();
        assert!(big.mean > small.mean);
        // Every draw contributes its full weight, which is never below α(0).
        assert!(small.mean >= crate::kernels::wrp_weight(&cfg, 0));
    }

    #[test]
    fn estimator_rejects_bad_input() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let x = p(&[0.0, 0.0, 1.0]);
        assert!(mc_kernel_estimate(&x, &x, &cfg, 1, StreamKey::new(0, 0)).is_err());
        let data = LabeledDataset::new(vec![x.clone()], vec![1.0]).unwrap();
        assert!(matches!(
            mc_ensemble_margin(&x, &data, &cfg, 100, StreamKey::new(0, 0)),
            Err(Error::CoincidentQuery { index: 0 })
        ));
    }

    #[test]
    fn margin_single_antipodal_point() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let x = p(&[0.0, 0.0, 1.0]);
        let data = LabeledDataset::new(vec![x.antipode()], vec![1.0]).unwrap();
        let est = mc_ensemble_margin(&x, &data, &cfg, 100_000, StreamKey::new(4, 0)).unwrap();
        assert!((est.mean - PI.powi(-2)).abs() <= 5.0 * est.stderr);
    }

    #[test]
    fn margin_of_symmetric_pair_is_zero() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        let x = p(&[0.0, 0.0, 1.0]);
        let a = FRAC_PI_2;
        let z1 = p(&[a.sin(), 0.0, a.cos()]);
        let z2 = p(&[-a.sin(), 0.0, a.cos()]);
        let data = LabeledDataset::new(vec![z1, z2], vec![1.0, -1.0]).unwrap();
        let est = mc_ensemble_margin(&x, &data, &cfg, 100_000, StreamKey::new(4, 1)).unwrap();
        assert!(est.mean.abs() <= 5.0 * est.stderr, "{est:?}");
        let closed = wrp_kernel_closed_form(a, &cfg).unwrap().value();
        assert!(est.stderr < closed);
    }

    #[test]
    fn second_moment_is_finite_only_above_the_threshold() {
        let cfg = WrpConfig::geometric(-2.0, 0.9, 2).unwrap();
        assert!(estimator_second_moment(&cfg, 0.05 * PI).is_infinite());
        let m2 = estimator_second_moment(&cfg, FRAC_PI_2);
        // r = 0.9, t = 0.5: 10·Σ(h+1)²(5/9)^h = 10·(1+t')/(1-t')³, t' = 5/9.
        let t: f64 = 5.0 / 9.0;
        let expected = PI.powi(-4) * 10.0 * (1.0 + t) / (1.0 - t).powi(3);
        assert!((m2 - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn cube_partition_examples() {
        assert_eq!(
            cube_partition_cell(1, &[0.3, 0.9]).unwrap(),
            CubeCell(vec![0, 0])
        );
        assert_eq!(
            cube_partition_cell(2, &[0.25, 0.75]).unwrap(),
            CubeCell(vec![0, 1])
        );
        assert_eq!(
            cube_partition_cell(4, &[1.0, 0.0]).unwrap(),
            CubeCell(vec![3, 0])
        );
        assert!(cube_partition_cell(4, &[1.1, 0.0]).is_err());
        assert!(cube_partition_cell(4, &[-0.1]).is_err());
        assert!(cube_partition_cell(0, &[0.5]).is_err());
    }
}
