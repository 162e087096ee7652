//! The kernel smoother reproduces every training label.

use std::time::Instant;

use mhk_core::geometry::geodesic_distance;
use mhk_core::smoothing::{ensemble_classify, kernel_smooth_regress, sgn};
use mhk_core::synthdata::{sample_labels, sample_points, LabelModel, SphereDistribution};
use mhk_core::{Branch, KernelSpec, LabeledDataset, RngStream, SpherePoint};
use serde_json::json;

use crate::{count_true, root_key, Cell, Draft, ExperimentConfig, ExperimentReport, Verdict};

const HEADER: &[&str] = &[
    "seed",
    "n",
    "regress_matches",
    "classify_matches",
    "min_pairwise_distance",
    "pass",
];

fn min_pairwise_distance(points: &[SpherePoint]) -> mhk_core::Result<f64> {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(geodesic_distance(a, b)?);
        }
    }
    Ok(best)
}

pub fn run_interpolation(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    let started = Instant::now();
    let spec = KernelSpec::wrp(cfg.wrp()?)?;
    let model = LabelModel::Constant {
        eta: cfg.interpolation_eta,
    };
    let dist = SphereDistribution::uniform(cfg.dim);
    let root = root_key(cfg, "interpolation");
    let n = cfg.interpolation_n;
    let mut rows = Vec::new();
    let mut passes = Vec::new();
    for seed in 0..cfg.interpolation_seeds {
        let mut rng = RngStream::new(root.child(seed as u64));
        let points = sample_points(&dist, n, &mut rng)?;
        let labels = sample_labels(&points, &model, &mut rng);
        let data = LabeledDataset::new(points, labels)?;
        let (mut regress_ok, mut classify_ok) = (0usize, 0usize);
        for (x, y) in data.iter() {
            let est = kernel_smooth_regress(x, &data, &spec)?;
            if est.branch == Branch::Interpolation && est.value == y {
                regress_ok += 1;
            }
            if ensemble_classify(x, &data, &spec)? == sgn(y) {
                classify_ok += 1;
            }
        }
        let min_dist = min_pairwise_distance(data.points())?;
        let pass = regress_ok == n && classify_ok == n;
        passes.push(pass);
        rows.push(vec![
            Cell::from(seed),
            Cell::from(n),
            Cell::from(regress_ok),
            Cell::from(classify_ok),
            Cell::from(min_dist),
            Cell::from(pass),
        ]);
    }
    let ok = count_true(&passes);
    let verdicts = vec![Verdict::new(
        "interpolates_every_training_point",
        ok == passes.len(),
        format!(
            "{ok}/{} seeds with {n}/{n} exact regressor and classifier matches",
            passes.len()
        ),
    )];
    Ok(Draft {
        name: "interpolation",
        header: HEADER,
        rows,
        verdicts,
        extra: json!({ "eta": cfg.interpolation_eta }),
    }
    .finish(cfg, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noisy_labels_interpolated() {
        let cfg = ExperimentConfig {
            interpolation_seeds: 2,
            ..Default::default()
        };
        let r = run_interpolation(&cfg).unwrap();
        assert_eq!(r.floats("regress_matches"), vec![200.0, 200.0]);
        assert!(r.floats("min_pairwise_distance").iter().all(|&d| d > 0.0));
        assert!(r.passed());
    }

    #[test]
    fn single_point() {
        let cfg = ExperimentConfig {
            interpolation_n: 1,
            interpolation_seeds: 1,
            ..Default::default()
        };
        let r = run_interpolation(&cfg).unwrap();
        assert_eq!(r.floats("classify_matches"), vec![1.0]);
        assert_eq!(r.floats("min_pairwise_distance"), vec![f64::INFINITY]);
        assert!(r.passed());
    }
}
