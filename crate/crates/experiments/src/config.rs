use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use mhk_core::synthdata::{LabelModel, SphereDistribution};
use mhk_core::{SpherePoint, WrpConfig};
use serde::{Deserialize, Serialize};

/// Minimum margin by which the pmf ratio must exceed `1 - φ` for Monte Carlo runs.
pub const VARIANCE_GUARD_MARGIN: f64 = 0.05;

/// Settings for every experiment. Missing JSON fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Informational; the subcommand decides what runs.
    pub experiment: Option<String>,
    /// Sphere dimension `d` (points live on `S^d ⊂ R^{d+1}`).
    pub dim: usize,
    /// Kernel exponent, strictly negative.
    pub q: f64,
    /// Ratio of the geometric height pmf.
    pub ratio: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,

    pub collision_samples: usize,
    pub collision_heights: Vec<usize>,
    /// Angles in units of π.
    pub collision_angles: Vec<f64>,

    /// Monte Carlo draws per angle in the kernel-equivalence run.
    pub n_mc: usize,
    /// Angles in units of π.
    pub equivalence_angles: Vec<f64>,
    pub series_terms: usize,

    pub interpolation_n: usize,
    pub interpolation_seeds: usize,
    pub interpolation_eta: f64,

    pub n_train: Vec<usize>,
    pub n_queries: usize,
    pub n_seeds: usize,
    pub bayes_n_mc: usize,
    pub max_excess: f64,
    /// Defaults to uniform on `S^dim`.
    pub distribution: Option<SphereDistribution>,
    /// Defaults to `η(x) = (1 + x·e_dim)/2`.
    pub label_model: Option<LabelModel>,

    pub ensemble_datasets: usize,
    pub ensemble_points: usize,
    pub ensemble_queries: usize,
    pub ensemble_n_mc: usize,
    pub ensemble_min_within: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            dim: 2,
            q: -2.0,
            ratio: 0.9,
            seed: 0,
            out: PathBuf::from("results"),
            threads: None,
            collision_samples: 100_000,
            collision_heights: vec![1, 3],
            collision_angles: vec![0.0, 1.0 / 6.0, 0.25, 0.5, 0.75, 1.0],
            n_mc: 1_000_000,
            equivalence_angles: vec![0.25, 0.5, 0.75, 1.0],
            series_terms: 400,
            interpolation_n: 200,
            interpolation_seeds: 10,
            interpolation_eta: 0.5,
            n_train: vec![100, 500, 2000],
            n_queries: 500,
            n_seeds: 20,
            bayes_n_mc: 200_000,
            max_excess: 0.05,
            distribution: None,
            label_model: None,
            ensemble_datasets: 10,
            ensemble_points: 10,
            ensemble_queries: 50,
            ensemble_n_mc: 200_000,
            ensemble_min_within: 0.98,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub dim: Option<usize>,
    pub q: Option<f64>,
    pub ratio: Option<f64>,
    /// Replaces every Monte Carlo sample count.
    pub samples: Option<usize>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> anyhow::Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
        if let Some(v) = o.dim {
            self.dim = v;
        }
        if let Some(v) = o.q {
            self.q = v;
        }
        if let Some(v) = o.ratio {
            self.ratio = v;
        }
        if let Some(v) = o.samples {
            self.collision_samples = v;
            self.n_mc = v;
            self.ensemble_n_mc = v;
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
    }

    pub fn wrp(&self) -> anyhow::Result<WrpConfig> {
        Ok(WrpConfig::geometric(self.q, self.ratio, self.dim)?)
    }

    pub fn distribution(&self) -> SphereDistribution {
        self.distribution
            .clone()
            .unwrap_or_else(|| SphereDistribution::uniform(self.dim))
    }

    pub fn label_model(&self) -> anyhow::Result<LabelModel> {
        match &self.label_model {
            Some(m) => Ok(m.clone()),
            None => Ok(LabelModel::Linear {
                axis: SpherePoint::north_pole(self.dim)?,
            }),
        }
    }

    /// Checks settings shared by all experiments.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.wrp()?;
        if self.threads == Some(0) {
            bail!("threads must be at least 1");
        }
        let dist = self.distribution();
        dist.validate()?;
        if dist.dim() != self.dim {
            bail!(
                "distribution lives on S^{} but dim is {}",
                dist.dim(),
                self.dim
            );
        }
        let axis_dim = match self.label_model()? {
            LabelModel::Constant { eta } => {
                if !(0.0..=1.0).contains(&eta) {
                    bail!("label model eta must lie in [0, 1], got {eta}");
                }
                None
            }
            LabelModel::Linear { axis } | LabelModel::Threshold { axis } => Some(axis.dim()),
        };
        if let Some(d) = axis_dim.filter(|&d| d != self.dim) {
            bail!("label model axis lives on S^{d} but dim is {}", self.dim);
        }
        for (name, angles) in [
            ("collision_angles", &self.collision_angles),
            ("equivalence_angles", &self.equivalence_angles),
        ] {
            if let Some(a) = angles.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                bail!("{name} are in units of π and must lie in [0, 1], got {a}");
            }
        }
        if self.equivalence_angles.contains(&0.0) {
            bail!("equivalence_angles must be positive: the kernel is infinite at angle 0");
        }
        for (name, v) in [
            ("collision_samples", self.collision_samples),
            ("n_mc", self.n_mc),
            ("bayes_n_mc", self.bayes_n_mc),
            ("ensemble_n_mc", self.ensemble_n_mc),
        ] {
            if v < 2 {
                bail!("{name} must be at least 2, got {v}");
            }
        }
        for (name, v) in [
            ("interpolation_n", self.interpolation_n),
            ("interpolation_seeds", self.interpolation_seeds),
            ("n_queries", self.n_queries),
            ("n_seeds", self.n_seeds),
            ("ensemble_datasets", self.ensemble_datasets),
            ("ensemble_points", self.ensemble_points),
            ("ensemble_queries", self.ensemble_queries),
        ] {
            if v == 0 {
                bail!("{name} must be positive");
            }
        }
        if self.n_train.is_empty() || self.n_train.contains(&0) {
            bail!("n_train must be a nonempty list of positive sizes");
        }
        if !(0.0..=1.0).contains(&self.interpolation_eta) {
            bail!("interpolation_eta must lie in [0, 1]");
        }
        Ok(())
    }

    /// Smallest angle over π the Monte Carlo estimators tolerate at this ratio.
    pub fn min_guarded_phi(&self) -> f64 {
        1.0 - self.ratio + VARIANCE_GUARD_MARGIN
    }

    /// Refuses when `ratio ≤ 1 - φ + margin` for the given angle over π.
    pub fn check_variance_guard(&self, phi: f64) -> anyhow::Result<()> {
        if self.ratio > 1.0 - phi + VARIANCE_GUARD_MARGIN {
            return Ok(());
        }
        bail!(
            "variance guard: ratio {} must exceed 1 - φ + {} = {} at angle {}π; \
             the Monte Carlo estimator's variance is infinite for ratio ≤ 1 - φ. \
             Raise --ratio or drop the small angles",
            self.ratio,
            VARIANCE_GUARD_MARGIN,
            1.0 - phi + VARIANCE_GUARD_MARGIN,
            phi
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"seed": 9, "n_train": [10, 20]}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.n_train, vec![10, 20]);
        assert_eq!(cfg.q, -2.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"sed": 9}"#).is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply(&Overrides {
            seed: Some(7),
            samples: Some(500),
            ratio: Some(0.95),
            ..Default::default()
        });
        assert_eq!(cfg.seed, 7);
        assert_eq!(
            (cfg.n_mc, cfg.collision_samples, cfg.ensemble_n_mc),
            (500, 500, 500)
        );
        assert_eq!(cfg.ratio, 0.95);
    }

    #[test]
    fn guard() {
        let cfg = ExperimentConfig::default();
        assert!(cfg.check_variance_guard(0.25).is_ok());
        assert!(cfg.check_variance_guard(0.15).is_err());
        assert!(cfg.check_variance_guard(0.1).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let cfg = ExperimentConfig {
            dim: 3,
            label_model: Some(LabelModel::Threshold {
                axis: SpherePoint::north_pole(2).unwrap(),
            }),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig {
            q: 1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
