//! End-to-end checks of the binary: exit codes, output files, determinism
//! across seeds and worker counts, and the env-var seed fallback.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polytor")
}

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/acceptance.json")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polytor_cli_{tag}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn digest_of(out_dir: &Path) -> String {
    let text = std::fs::read_to_string(out_dir.join("results.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["digest"].as_str().unwrap().to_string()
}

fn run_ok(args: &[&str]) -> Output {
    let output = Command::new(bin()).args(args).output().unwrap();
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn bundled_config_runs_clean_and_writes_outputs() {
    let out = temp_dir("run");
    let config = bundled_config();
    run_ok(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(out.join("results.json").exists());
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(csv.starts_with("name,lhs,rhs,constant,margin,pass"));
    assert!(csv.lines().count() > 100);
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn reruns_and_worker_counts_share_one_digest() {
    let config = bundled_config();
    let dirs: Vec<PathBuf> = ["a", "b", "j1", "j8"]
        .iter()
        .map(|t| temp_dir(&format!("det_{t}")))
        .collect();
    for (dir, jobs) in dirs.iter().zip(["0", "0", "1", "8"]) {
        run_ok(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "2024",
            "--jobs",
            jobs,
            "--out",
            dir.to_str().unwrap(),
        ]);
    }
    let digests: Vec<String> = dirs.iter().map(|d| digest_of(d)).collect();
    assert_eq!(digests[0], digests[1], "rerun changed the digest");
    assert_eq!(digests[2], digests[3], "worker count changed the digest");
    assert_eq!(digests[0], digests[2]);
    for d in dirs {
        std::fs::remove_dir_all(d).ok();
    }
}

#[test]
fn missing_config_exits_two() {
    let output = Command::new(bin())
        .args(["run", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_config_exits_two() {
    let dir = temp_dir("bad");
    let path = dir.join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let output = Command::new(bin())
        .args(["run", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn filter_restricts_to_matching_checks() {
    let out = temp_dir("filter");
    let config = bundled_config();
    run_ok(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--filter",
        "lemma1*",
        "--out",
        out.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert!(line.starts_with("lemma1"), "unexpected row {line}");
    }
    std::fs::remove_dir_all(&out).ok();
}

#[test]
fn env_seed_is_the_fallback_and_the_flag_wins() {
    let config = bundled_config();
    let by_flag = temp_dir("seed_flag");
    let by_env = temp_dir("seed_env");
    let flag_beats = temp_dir("seed_both");
    run_ok(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "77",
        "--filter",
        "cotype_def",
        "--out",
        by_flag.to_str().unwrap(),
    ]);
    let output = Command::new(bin())
        .env("POLYTOR_SEED", "77")
        .args([
            "run",
            "--config",
            config.to_str().unwrap(),
            "--filter",
            "cotype_def",
            "--out",
            by_env.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let output = Command::new(bin())
        .env("POLYTOR_SEED", "1234")
        .args([
            "run",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "77",
            "--filter",
            "cotype_def",
            "--out",
            flag_beats.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());

    assert_eq!(digest_of(&by_flag), digest_of(&by_env));
    assert_eq!(digest_of(&by_flag), digest_of(&flag_beats));
    for d in [by_flag, by_env, flag_beats] {
        std::fs::remove_dir_all(d).ok();
    }
}

#[test]
fn constants_subcommand_prints_reproducible_json() {
    let output = run_ok(&[
        "constants",
        "--space",
        r#"{"family":"euclidean","dim":2}"#,
        "--q",
        "2",
        "--budget",
        "16",
        "--seed",
        "5",
    ]);
    let text = String::from_utf8(output.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["name"], "cotype");
    let estimate = value["value"].as_f64().unwrap();
    assert!((estimate - 1.0).abs() < 1e-6, "euclidean cotype {estimate}");

    let again = run_ok(&[
        "constants",
        "--space",
        r#"{"family":"euclidean","dim":2}"#,
        "--q",
        "2",
        "--budget",
        "16",
        "--seed",
        "5",
    ]);
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn constants_rejects_invalid_exponents() {
    // q < 2 violates the cotype domain
    let output = Command::new(bin())
        .args([
            "constants",
            "--space",
            r#"{"family":"euclidean","dim":2}"#,
            "--q",
            "1.5",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // both or neither exponent is a usage error
    let output = Command::new(bin())
        .args(["constants", "--space", r#"{"family":"euclidean","dim":2}"#])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn tables_emits_the_three_csv_files() {
    let out = temp_dir("tables");
    run_ok(&["tables", "--out", out.to_str().unwrap()]);
    let hilbert = std::fs::read_to_string(out.join("hilbert_growth.csv")).unwrap();
    assert_eq!(hilbert.lines().count(), 1 + 13); // header + m in 0..=12
    let stirling = std::fs::read_to_string(out.join("stirling_ratios.csv")).unwrap();
    assert!(stirling.lines().count() > 40);
    let kahane = std::fs::read_to_string(out.join("kahane_ratios.csv")).unwrap();
    assert_eq!(kahane.lines().count(), 1 + 3 * 3 * 2 * 2); // spaces x degrees x pairs x kinds
    std::fs::remove_dir_all(&out).ok();
}
