use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhk_experiments::{Experiment, ExperimentConfig, Overrides};

/// Manifold-Hilbert kernel and hyperplane-ensemble experiments on the sphere.
///
/// Writes `<out>/<experiment>.csv` and `<out>/<experiment>.summary.json`.
/// Exits with 0 when every verdict passes, 2 when a verdict fails and 1 on
/// configuration or runtime errors.
#[derive(Parser)]
#[command(name = "mhk", version = env!("MHK_VERSION"))]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Same-cell frequency under h random hyperplanes.
    Collision,
    /// Closed form, series and Monte Carlo estimate of the kernel.
    KernelEquivalence,
    /// The smoother reproduces every training label.
    Interpolation,
    /// Held-out error as the training set grows.
    Consistency,
    /// Ensemble margin against the closed-form margin.
    EnsembleAgreement,
    /// Every experiment in turn.
    All,
}

#[derive(Args)]
struct Opts {
    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sphere dimension d.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Kernel exponent (negative).
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Ratio of the geometric height distribution.
    #[arg(long, global = true)]
    ratio: Option<f64>,
    /// Monte Carlo sample count for every Monte Carlo estimate.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

fn experiments(c: Command) -> Vec<Experiment> {
    match c {
        Command::Collision => vec![Experiment::Collision],
        Command::KernelEquivalence => vec![Experiment::KernelEquivalence],
        Command::Interpolation => vec![Experiment::Interpolation],
        Command::Consistency => vec![Experiment::Consistency],
        Command::EnsembleAgreement => vec![Experiment::EnsembleAgreement],
        Command::All => Experiment::ALL.to_vec(),
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let mut cfg = match &cli.opts.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    let o = &cli.opts;
    cfg.apply(&Overrides {
        seed: o.seed,
        out: o.out.clone(),
        dim: o.dim,
        q: o.q,
        ratio: o.ratio,
        samples: o.samples,
        threads: o.threads,
    });
    cfg.validate()?;
    let mut all_passed = true;
    for exp in experiments(cli.command) {
        let report = exp.run(&cfg)?;
        let (csv, _) = report.write(&cfg.out)?;
        for v in &report.verdicts {
            println!(
                "{} {}: {} ({})",
                if v.passed { "PASS" } else { "FAIL" },
                exp.name(),
                v.criterion,
                v.detail
            );
        }
        println!(
            "wrote {} in {:.1}s",
            csv.display(),
            report.wall_time_seconds
        );
        all_passed &= report.passed();
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
