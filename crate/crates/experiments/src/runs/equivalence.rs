//! Closed form, truncated series and Monte Carlo ensemble estimate of the kernel.

use std::f64::consts::PI;
use std::time::Instant;

use mhk_core::kernels::{wrp_kernel_closed_form, wrp_kernel_series};
use mhk_core::partitions::mc_kernel_estimate;
use serde_json::json;

use crate::runs::collision::pair_at_angle;
use crate::{count_true, root_key, Cell, Draft, ExperimentConfig, ExperimentReport, Verdict};

pub const MC_Z_LIMIT: f64 = 5.0;
pub const SERIES_TOLERANCE: f64 = 1e-8;
/// Largest accepted `stderr / closed form` at angles of at least π/2.
pub const MAX_REL_STDERR: f64 = 0.02;

const HEADER: &[&str] = &[
    "angle",
    "closed_form",
    "series",
    "series_truncated",
    "mc_mean",
    "mc_stderr",
    "rel_stderr",
    "z_score",
    "mc_ok",
    "series_ok",
    "stderr_ok",
    "pass",
];

pub fn run_kernel_equivalence(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    let started = Instant::now();
    for &phi in &cfg.equivalence_angles {
        cfg.check_variance_guard(phi)?;
    }
    let wrp = cfg.wrp()?;
    let root = root_key(cfg, "kernel-equivalence");
    let mut rows = Vec::new();
    let (mut mc_oks, mut series_oks, mut stderr_oks) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &phi) in cfg.equivalence_angles.iter().enumerate() {
        let angle = phi * PI;
        let closed = wrp_kernel_closed_form(angle, &wrp)?.value();
        let series = wrp_kernel_series(angle, &wrp, cfg.series_terms)?;
        let (x, z) = pair_at_angle(cfg.dim, angle)?;
        let mc = mc_kernel_estimate(&x, &z, &wrp, cfg.n_mc, root.child(i as u64))?;
        let rel_stderr = mc.stderr / closed;
        let z_score = mc.z_score(closed);
        let mc_ok = z_score.abs() <= MC_Z_LIMIT;
        let series_ok = (series.partial_sum - closed).abs() <= SERIES_TOLERANCE * closed.max(1.0);
        let stderr_ok = phi < 0.5 || rel_stderr <= MAX_REL_STDERR;
        mc_oks.push(mc_ok);
        series_oks.push(series_ok);
        stderr_oks.push(stderr_ok);
        rows.push(vec![
            Cell::from(angle),
            Cell::from(closed),
            Cell::from(series.partial_sum),
            Cell::from(series.truncated),
            Cell::from(mc.mean),
            Cell::from(mc.stderr),
            Cell::from(rel_stderr),
            Cell::from(z_score),
            Cell::from(mc_ok),
            Cell::from(series_ok),
            Cell::from(stderr_ok),
            Cell::from(mc_ok && series_ok && stderr_ok),
        ]);
    }
    let n = rows.len();
    let verdicts = vec![
        Verdict::new(
            "mc_within_5_se",
            count_true(&mc_oks) == n,
            format!(
                "{}/{n} angles with |mc - closed| <= {MC_Z_LIMIT} stderr",
                count_true(&mc_oks)
            ),
        ),
        Verdict::new(
            "series_matches_closed_form",
            count_true(&series_oks) == n,
            format!(
                "{}/{n} angles with |series({}) - closed| <= {SERIES_TOLERANCE:e} max(1, closed)",
                count_true(&series_oks),
                cfg.series_terms
            ),
        ),
        Verdict::new(
            "relative_stderr_at_most_2_percent",
            count_true(&stderr_oks) == n,
            format!(
                "{}/{n} angles pass (checked where angle >= pi/2)",
                count_true(&stderr_oks)
            ),
        ),
    ];
    Ok(Draft {
        name: "kernel-equivalence",
        header: HEADER,
        rows,
        verdicts,
        extra: json!({ "n_mc": cfg.n_mc, "series_terms": cfg.series_terms }),
    }
    .finish(cfg, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_values() {
        let cfg = ExperimentConfig {
            n_mc: 50_000,
            equivalence_angles: vec![0.5, 1.0],
            ..Default::default()
        };
        let r = run_kernel_equivalence(&cfg).unwrap();
        let closed = r.floats("closed_form");
        assert!((closed[0] - 4.0 / (PI * PI)).abs() < 1e-15);
        assert!((closed[1] - 1.0 / (PI * PI)).abs() < 1e-15);
        let series = r.floats("series");
        assert!((series[1] - closed[1]).abs() < 1e-12);
        assert!(r.bools("series_ok").iter().all(|&b| b));
    }

    #[test]
    fn quarter_turn_with_q_minus_one() {
        let cfg = ExperimentConfig {
            q: -1.0,
            n_mc: 20_000,
            equivalence_angles: vec![0.25],
            ..Default::default()
        };
        let r = run_kernel_equivalence(&cfg).unwrap();
        assert!((r.floats("closed_form")[0] - 4.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn guard_refuses_small_angles() {
        let cfg = ExperimentConfig {
            equivalence_angles: vec![0.1, 0.5],
            ..Default::default()
        };
        let err = run_kernel_equivalence(&cfg).unwrap_err();
        assert!(err.to_string().contains("variance guard"));
    }
}
