//! Experiment runners for the `mhk` command-line tool.
//!
//! Each runner takes an [`ExperimentConfig`] and returns an
//! [`ExperimentReport`] holding the CSV rows and the verdicts derived from
//! them. Rows are produced in a fixed order from seeded streams, so output is
//! identical for any thread count.

use std::time::Instant;

use anyhow::Context;
use mhk_core::StreamKey;
use serde_json::Value;

pub mod config;
pub mod report;
mod runs;

pub use config::{ExperimentConfig, Overrides};
pub use report::{Cell, ExperimentReport, Verdict};
pub use runs::collision::run_collision;
pub use runs::consistency::run_consistency;
pub use runs::ensemble::run_ensemble_agreement;
pub use runs::equivalence::run_kernel_equivalence;
pub use runs::interpolation::run_interpolation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Collision,
    KernelEquivalence,
    Interpolation,
    Consistency,
    EnsembleAgreement,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Collision,
        Experiment::KernelEquivalence,
        Experiment::Interpolation,
        Experiment::Consistency,
        Experiment::EnsembleAgreement,
    ];

    /// File stem and CLI subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Collision => "collision",
            Experiment::KernelEquivalence => "kernel-equivalence",
            Experiment::Interpolation => "interpolation",
            Experiment::Consistency => "consistency",
            Experiment::EnsembleAgreement => "ensemble-agreement",
        }
    }

    /// Runs inside the thread pool requested by `cfg.threads`.
    pub fn run(self, cfg: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
        cfg.validate()?;
        with_threads(cfg.threads, || match self {
            Experiment::Collision => run_collision(cfg),
            Experiment::KernelEquivalence => run_kernel_equivalence(cfg),
            Experiment::Interpolation => run_interpolation(cfg),
            Experiment::Consistency => run_consistency(cfg),
            Experiment::EnsembleAgreement => run_ensemble_agreement(cfg),
        })?
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> anyhow::Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building thread pool")?;
            Ok(pool.install(f))
        }
    }
}

/// Root stream for one experiment.
pub(crate) fn root_key(cfg: &ExperimentConfig, name: &str) -> StreamKey {
    StreamKey::new(cfg.seed, 0).labeled(name)
}

pub(crate) struct Draft {
    pub name: &'static str,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<Verdict>,
    pub extra: Value,
}

impl Draft {
    pub fn finish(self, cfg: &ExperimentConfig, started: Instant) -> ExperimentReport {
        debug_assert!(self.rows.iter().all(|r| r.len() == self.header.len()));
        let mut echo = cfg.clone();
        echo.experiment = Some(self.name.to_string());
        ExperimentReport {
            name: self.name.to_string(),
            header: self.header.iter().map(|s| s.to_string()).collect(),
            rows: self.rows,
            verdicts: self.verdicts,
            extra: self.extra,
            config: serde_json::to_value(&echo).expect("config serializes"),
            seed: cfg.seed,
            threads: rayon::current_num_threads(),
            wall_time_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

pub(crate) fn count_true(values: &[bool]) -> usize {
    values.iter().filter(|&&b| b).count()
}
