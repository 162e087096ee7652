//! Held-out classification and regression error as the training set grows.
//!
//! Queries are drawn uniformly and weighted by the density ratio of the
//! training law, so weighted averages integrate against the training
//! distribution. Classification error is the exact conditional risk of the
//! prediction at each query, which removes label noise from the estimate.
//!
//! The verdicts check a monotone trend at a few sample sizes. Convergence in
//! probability has no rate, so this is a heuristic proxy rather than a test of
//! the limit itself.

use std::time::Instant;

use mhk_core::smoothing::{ensemble_classify, kernel_smooth_regress, l1_error_estimate};
use mhk_core::stats::median;
use mhk_core::synthdata::{bayes_risk, sample_labels, sample_points, SphereDistribution};
use mhk_core::{KernelSpec, LabeledDataset, RngStream, StreamKey};
use rayon::prelude::*;
use serde_json::json;

use crate::{root_key, Cell, Draft, ExperimentConfig, ExperimentReport, Verdict};

/// Bayes-risk echo tolerance in standard errors.
pub const BAYES_Z_LIMIT: f64 = 4.0;

const HEADER: &[&str] = &[
    "n",
    "seed",
    "classif_error",
    "bayes_risk",
    "excess_over_bayes",
    "j_n_hat",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyRow {
    pub n: usize,
    pub seed: usize,
    pub classif_error: f64,
    pub bayes_risk: f64,
    pub excess_over_bayes: f64,
    pub j_n_hat: f64,
}

fn one_fit(
    cfg: &ExperimentConfig,
    spec: &KernelSpec<mhk_core::Sphere>,
    key: StreamKey,
    n: usize,
    seed: usize,
) -> anyhow::Result<ConsistencyRow> {
    let dist = cfg.distribution();
    let model = cfg.label_model()?;
    let mut train_rng = RngStream::new(key.labeled("train"));
    let points = sample_points(&dist, n, &mut train_rng)?;
    let labels = sample_labels(&points, &model, &mut train_rng);
    let data = LabeledDataset::new(points, labels)?;

    let mut query_rng = RngStream::new(key.labeled("queries"));
    let queries = sample_points(
        &SphereDistribution::uniform(cfg.dim),
        cfg.n_queries,
        &mut query_rng,
    )?;
    let mut weights = queries
        .iter()
        .map(|x| dist.density_ratio(x))
        .collect::<mhk_core::Result<Vec<f64>>>()?;
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    let (mut estimates, mut truth) = (
        Vec::with_capacity(queries.len()),
        Vec::with_capacity(queries.len()),
    );
    let (mut error, mut bayes) = (0.0, 0.0);
    for (x, &w) in queries.iter().zip(&weights) {
        let eta = model.eta(x);
        let prediction = ensemble_classify(x, &data, spec)?;
        error += w * if prediction > 0.0 { 1.0 - eta } else { eta };
        bayes += w * eta.min(1.0 - eta);
        estimates.push(kernel_smooth_regress(x, &data, spec)?.value);
        truth.push(model.regression(x));
    }
    let j_n_hat = l1_error_estimate(&estimates, &truth, &weights)?;
    Ok(ConsistencyRow {
        n,
        seed,
        classif_error: error,
        bayes_risk: bayes,
        excess_over_bayes: error - bayes,
        j_n_hat,
    })
}

/// One row per `(n, seed)`, in that order.
pub fn consistency_rows(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ConsistencyRow>> {
    let spec = KernelSpec::wrp(cfg.wrp()?)?;
    let root = root_key(cfg, "consistency");
    let jobs: Vec<(usize, usize)> = cfg
        .n_train
        .iter()
        .flat_map(|&n| (0..cfg.n_seeds).map(move |s| (n, s)))
        .collect();
    jobs.par_iter()
        .map(|&(n, seed)| one_fit(cfg, &spec, root.child(n as u64).child(seed as u64), n, seed))
        .collect()
}

pub fn run_consistency(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    let started = Instant::now();
    let rows = consistency_rows(cfg)?;

    let mut sizes = cfg.n_train.clone();
    sizes.dedup();
    let per_n: Vec<(usize, f64, f64, f64)> = sizes
        .iter()
        .map(|&n| {
            let of = |f: fn(&ConsistencyRow) -> f64| {
                median(&rows.iter().filter(|r| r.n == n).map(f).collect::<Vec<_>>())
            };
            (
                n,
                of(|r| r.classif_error),
                of(|r| r.excess_over_bayes),
                of(|r| r.j_n_hat),
            )
        })
        .collect();

    let mut verdicts = Vec::new();
    let (first, last) = (per_n[0], per_n[per_n.len() - 1]);
    verdicts.push(Verdict::new(
        "excess_not_larger_at_largest_n",
        last.2 <= first.2,
        format!(
            "median excess {:.4} at n={} vs {:.4} at n={}",
            last.2, last.0, first.2, first.0
        ),
    ));
    verdicts.push(Verdict::new(
        "excess_small_at_largest_n",
        last.2 <= cfg.max_excess,
        format!(
            "median excess {:.4} at n={} (limit {})",
            last.2, last.0, cfg.max_excess
        ),
    ));
    let decreasing = per_n.windows(2).all(|w| w[1].3 < w[0].3);
    verdicts.push(Verdict::new(
        "l1_error_strictly_decreasing",
        decreasing,
        format!(
            "median J_n: {}",
            per_n
                .iter()
                .map(|p| format!("n={} {:.4}", p.0, p.3))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));

    let dist = cfg.distribution();
    let model = cfg.label_model()?;
    let mut rng = RngStream::new(root_key(cfg, "consistency").labeled("bayes"));
    let bayes = bayes_risk(&dist, &model, cfg.bayes_n_mc, &mut rng)?;
    let analytic = model.analytic_bayes_risk(&dist);
    if let Some(a) = analytic {
        let z = bayes.z_score(a);
        verdicts.push(Verdict::new(
            "bayes_risk_matches_analytic",
            z.abs() <= BAYES_Z_LIMIT,
            format!(
                "Monte Carlo {:.5} ± {:.5} vs analytic {a} (z = {z:.2})",
                bayes.mean, bayes.stderr
            ),
        ));
    }

    let extra = json!({
        "per_n": per_n.iter().map(|p| json!({
            "n": p.0,
            "median_classif_error": p.1,
            "median_excess_over_bayes": p.2,
            "median_j_n_hat": p.3,
        })).collect::<Vec<_>>(),
        "bayes_risk": {
            "mc_mean": bayes.mean,
            "mc_stderr": bayes.stderr,
            "n_mc": bayes.n,
            "analytic": analytic,
        },
        "note": "monotone-trend verdicts are a heuristic proxy for convergence in probability",
    });
    let table = rows
        .iter()
        .map(|r| {
            vec![
                Cell::from(r.n),
                Cell::from(r.seed),
                Cell::from(r.classif_error),
                Cell::from(r.bayes_risk),
                Cell::from(r.excess_over_bayes),
                Cell::from(r.j_n_hat),
            ]
        })
        .collect();
    Ok(Draft {
        name: "consistency",
        header: HEADER,
        rows: table,
        verdicts,
        extra,
    }
    .finish(cfg, started))
}
