//! Monte Carlo ensemble margin against the closed-form kernel margin.

use std::time::Instant;

use mhk_core::geometry::geodesic_distance;
use mhk_core::partitions::mc_ensemble_margins;
use mhk_core::smoothing::{kernel_margin, kernel_smooth_regress, sgn};
use mhk_core::synthdata::{sample_labels, sample_points, LabelModel, SphereDistribution};
use mhk_core::{KernelSpec, LabeledDataset, RngStream, Sphere, SpherePoint, StreamKey};
use serde_json::json;

use std::f64::consts::PI;

use crate::{count_true, root_key, Cell, Draft, ExperimentConfig, ExperimentReport, Verdict};

pub const Z_LIMIT: f64 = 5.0;
const MAX_QUERY_ATTEMPTS: usize = 100_000;

const HEADER: &[&str] = &[
    "dataset",
    "query",
    "min_angle",
    "closed_margin",
    "mc_mean",
    "mc_stderr",
    "z_score",
    "within_5_se",
    "regress_value",
    "sign_checked",
    "sign_agree",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementRow {
    pub min_angle: f64,
    pub closed_margin: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub z_score: f64,
    pub within: bool,
    pub regress_value: f64,
    /// Sign agreement is only required where the closed margin is resolved.
    pub sign_checked: bool,
    pub sign_agree: bool,
}

fn min_angle(x: &SpherePoint, data: &LabeledDataset<SpherePoint>) -> mhk_core::Result<f64> {
    data.points()
        .iter()
        .try_fold(f64::INFINITY, |m, p| Ok(m.min(geodesic_distance(x, p)?)))
}

/// Compares the ensemble margin with the closed form at each query.
pub fn agreement_rows(
    cfg: &ExperimentConfig,
    data: &LabeledDataset<SpherePoint>,
    queries: &[SpherePoint],
    key: StreamKey,
) -> anyhow::Result<Vec<AgreementRow>> {
    let wrp = cfg.wrp()?;
    let spec: KernelSpec<Sphere> = KernelSpec::wrp(wrp)?;
    for x in queries {
        cfg.check_variance_guard(min_angle(x, data)? / PI)?;
    }
    let mc = mc_ensemble_margins(queries, data, &wrp, cfg.ensemble_n_mc, key)?;
    queries
        .iter()
        .zip(mc)
        .map(|(x, est)| {
            let closed = kernel_margin(x, data, &spec)?;
            let regress = kernel_smooth_regress(x, data, &spec)?.value;
            let z_score = est.z_score(closed);
            let sign_checked = closed.abs() > Z_LIMIT * est.stderr;
            Ok(AgreementRow {
                min_angle: min_angle(x, data)?,
                closed_margin: closed,
                mc_mean: est.mean,
                mc_stderr: est.stderr,
                z_score,
                within: z_score.abs() <= Z_LIMIT,
                regress_value: regress,
                sign_checked,
                sign_agree: sgn(est.mean) == sgn(regress),
            })
        })
        .collect()
}

/// Uniform queries whose angle to every training point clears the variance guard.
fn guarded_queries(
    cfg: &ExperimentConfig,
    data: &LabeledDataset<SpherePoint>,
    rng: &mut RngStream,
) -> anyhow::Result<Vec<SpherePoint>> {
    let dist = SphereDistribution::uniform(cfg.dim);
    let mut out = Vec::with_capacity(cfg.ensemble_queries);
    let mut attempts = 0;
    while out.len() < cfg.ensemble_queries {
        attempts += 1;
        if attempts > MAX_QUERY_ATTEMPTS {
            anyhow::bail!(
                "variance guard: could not place {} queries at angle > {}π from all {} training points; raise --ratio",
                cfg.ensemble_queries,
                cfg.min_guarded_phi(),
                data.len()
            );
        }
        let x = sample_points(&dist, 1, rng)?.pop().expect("one point");
        if cfg.check_variance_guard(min_angle(&x, data)? / PI).is_ok() {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn run_ensemble_agreement(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    let started = Instant::now();
    let root = root_key(cfg, "ensemble-agreement");
    let dist = SphereDistribution::uniform(cfg.dim);
    let model = LabelModel::Constant { eta: 0.5 };
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for k in 0..cfg.ensemble_datasets {
        let key = root.child(k as u64);
        let mut rng = RngStream::new(key.labeled("data"));
        let points = sample_points(&dist, cfg.ensemble_points, &mut rng)?;
        let labels = sample_labels(&points, &model, &mut rng);
        let data = LabeledDataset::new(points, labels)?;
        let queries = guarded_queries(cfg, &data, &mut rng)?;
        for (j, r) in agreement_rows(cfg, &data, &queries, key.labeled("mc"))?
            .into_iter()
            .enumerate()
        {
            rows.push(vec![
                Cell::from(k),
                Cell::from(j),
                Cell::from(r.min_angle),
                Cell::from(r.closed_margin),
                Cell::from(r.mc_mean),
                Cell::from(r.mc_stderr),
                Cell::from(r.z_score),
                Cell::from(r.within),
                Cell::from(r.regress_value),
                Cell::from(r.sign_checked),
                Cell::from(r.sign_agree),
            ]);
            all.push(r);
        }
    }
    let cells = all.len();
    let within = all.iter().filter(|r| r.within).count();
    let checked: Vec<bool> = all
        .iter()
        .filter(|r| r.sign_checked)
        .map(|r| r.sign_agree)
        .collect();
    let fraction = within as f64 / cells as f64;
    let verdicts = vec![
        Verdict::new(
            "mc_margin_within_5_se",
            fraction >= cfg.ensemble_min_within,
            format!(
                "{within}/{cells} cells ({:.2}%), need {:.0}%",
                100.0 * fraction,
                100.0 * cfg.ensemble_min_within
            ),
        ),
        Verdict::new(
            "sign_agrees_with_regressor",
            count_true(&checked) == checked.len(),
            format!(
                "{}/{} resolved cells agree",
                count_true(&checked),
                checked.len()
            ),
        ),
    ];
    Ok(Draft {
        name: "ensemble-agreement",
        header: HEADER,
        rows,
        verdicts,
        extra: json!({ "within_fraction": fraction, "sign_checked": checked.len(), "n_mc": cfg.ensemble_n_mc }),
    }
    .finish(cfg, started))
}
