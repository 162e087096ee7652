use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mhk(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhk"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

#[test]
fn writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = mhk(
        &["collision", "--seed", "3", "--samples", "2000"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("collision.csv")).unwrap();
    assert!(csv.starts_with("angle,h,n,empirical,theoretical,stderr,z_score,pass\n"));
    let summary: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("collision.summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["seed"], 3);
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["config"]["collision_samples"], 2000);
    assert!(summary["version"].as_str().unwrap().starts_with('v'));
    assert!(summary["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"seed": 1, "interpolation_n": 12, "interpolation_seeds": 2}"#,
    )
    .unwrap();
    let o = mhk(
        &[
            "interpolation",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "5",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("interpolation.summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["seed"], 5);
    assert_eq!(summary["config"]["interpolation_n"], 12);
    let csv = fs::read_to_string(dir.path().join("interpolation.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn guard_violation_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = mhk(&["kernel-equivalence", "--ratio", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("variance guard"));
    assert!(!dir.path().join("kernel-equivalence.csv").exists());
}

#[test]
fn invalid_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        mhk(&["interpolation", "--q", "0.5"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"no_such_field": 1}"#).unwrap();
    assert_eq!(
        mhk(
            &["interpolation", "--config", cfg.to_str().unwrap()],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn failed_verdict_exits_2_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n_train": [20, 40], "n_seeds": 2, "n_queries": 50, "bayes_n_mc": 1000, "max_excess": -1.0}"#).unwrap();
    let o = mhk(
        &["consistency", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stdout).contains("FAIL consistency: excess_small_at_largest_n")
    );
    let summary: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("consistency.summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["passed"], false);
}
