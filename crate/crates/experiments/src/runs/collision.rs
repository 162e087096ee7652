//! Same-cell frequency of two points under `h` Gaussian hyperplanes.

use std::f64::consts::PI;
use std::time::Instant;

use mhk_core::kernels::same_cell_probability;
use mhk_core::partitions::{same_cell, sample_arrangement_with_height};
use mhk_core::stats::sample_scalar;
use mhk_core::{RngStream, SpherePoint};
use serde_json::json;

use crate::{count_true, root_key, Cell, Draft, ExperimentConfig, ExperimentReport, Verdict};

pub const Z_LIMIT: f64 = 4.0;

const HEADER: &[&str] = &[
    "angle",
    "h",
    "n",
    "empirical",
    "theoretical",
    "stderr",
    "z_score",
    "pass",
];

/// `e_d` and the point at `angle` from it along `e_0`.
pub fn pair_at_angle(d: usize, angle: f64) -> mhk_core::Result<(SpherePoint, SpherePoint)> {
    let x = SpherePoint::north_pole(d)?;
    let mut z = vec![0.0; d + 1];
    z[0] = angle.sin();
    z[d] = angle.cos();
    Ok((x, SpherePoint::normalize(z)?))
}

pub fn run_collision(cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    let started = Instant::now();
    let root = root_key(cfg, "collision");
    let n = cfg.collision_samples;
    let mut rows = Vec::new();
    let mut passes = Vec::new();
    for (hi, &h) in cfg.collision_heights.iter().enumerate() {
        for (ai, &phi) in cfg.collision_angles.iter().enumerate() {
            let angle = phi * PI;
            let (x, z) = pair_at_angle(cfg.dim, angle)?;
            let key = root.child(hi as u64).child(ai as u64);
            let d = cfg.dim;
            let make = || {
                let (x, z) = (&x, &z);
                move |rng: &mut RngStream| {
                    let w = sample_arrangement_with_height(d, h, rng);
                    if same_cell(&w, x, z).expect("dimensions agree") {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            let empirical = sample_scalar(n, key, make).mean;
            let p = same_cell_probability(angle, h)?;
            let stderr = (p * (1.0 - p) / n as f64).sqrt();
            let diff = empirical - p;
            let z_score = if diff == 0.0 { 0.0 } else { diff / stderr };
            let pass = z_score.abs() <= Z_LIMIT;
            passes.push(pass);
            rows.push(vec![
                Cell::from(angle),
                Cell::from(h),
                Cell::from(n),
                Cell::from(empirical),
                Cell::from(p),
                Cell::from(stderr),
                Cell::from(z_score),
                Cell::from(pass),
            ]);
        }
    }
    let ok = count_true(&passes);
    let verdicts = vec![Verdict::new(
        "same_cell_within_4_se",
        ok == passes.len(),
        format!("{ok}/{} cells with |z| <= {Z_LIMIT}", passes.len()),
    )];
    Ok(Draft {
        name: "collision",
        header: HEADER,
        rows,
        verdicts,
        extra: json!({ "samples_per_cell": n }),
    }
    .finish(cfg, started))
}
