//! End-to-end runs of the `slln` binary and its exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn slln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slln"))
        .args(args)
        .env_remove("SLLN_BUDGET")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"
[x_model]
family = "iid"
dist = "normal:1"

[y_model]
family = "fully_dependent_pareto"
beta = 0.8
a = 0.5

[schedule]
rule = "power"
rho = 0.5

[diagnostics]
horizon = 10000
replicas = 20
"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn emit(dir: &Path, preset: &str) -> String {
    let path = dir.join(format!("{preset}.toml"));
    let o = slln(&["emit-preset", preset, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

#[test]
fn preset_catalogue() {
    let o = slln(&["presets"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in [
        "baseline_theorem",
        "kolmogorov_iid",
        "x_only_pairwise",
        "y_only_rare",
        "counterexample_dense",
        "counterexample_no_moment",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let o = slln(&["emit-preset", "no_such_preset"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("no_such_preset"));
}

#[test]
fn emitted_presets_round_trip_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in slln_cli::presets::names() {
        let first = fs::read_to_string(emit(dir.path(), name)).unwrap();
        let cfg = slln_core::ExperimentConfig::from_toml_str(&first, None).unwrap();
        assert_eq!(cfg.to_toml_string(), first, "{name}");
    }
}

#[test]
fn check_conditions_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let baseline = emit(dir.path(), "baseline_theorem");
    let out = dir.path().join("cond");
    let o = slln(&[
        "check-conditions",
        "--config",
        &baseline,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let kv = fs::read_to_string(out.join("conditions.txt")).unwrap();
    assert!(kv.ends_with("overall=satisfied\n"));
    assert!(out.join("manifest.txt").exists());

    let dense = emit(dir.path(), "counterexample_dense");
    let o = slln(&["check-conditions", "--config", &dense]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("rarity") && l.contains("violated")));
}

#[test]
fn malformed_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let no_a = write(dir.path(), "no_a.toml", &SMALL.replace("a = 0.5\n", ""));
    let o = slln(&["check-conditions", "--config", &no_a]);
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(err.contains("`a`") && err.contains("line"), "{err}");

    let one = write(
        dir.path(),
        "one.toml",
        &SMALL.replace("replicas = 20", "replicas = 1"),
    );
    let out = dir.path().join("o");
    let o = slln(&["simulate", "--config", &one, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("replicas"));

    let o = slln(&["check-conditions"]);
    assert_eq!(code(&o), 3);
    let o = slln(&[
        "simulate",
        "--config",
        "/nonexistent/x.toml",
        "--out",
        "/tmp",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&slln(&["--help"])), 0);
}

#[test]
fn budget_refusal_suggests_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", SMALL);
    let out = dir.path().join("o");
    let o = slln(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--budget",
        "50000",
    ]);
    assert_eq!(code(&o), 3);
    let err = stderr(&o);
    assert!(
        err.contains("replicas = 5") && err.contains("horizon = 2500"),
        "{err}"
    );

    let o = Command::new(env!("CARGO_BIN_EXE_slln"))
        .args(["simulate", "--config", &cfg, "--out", out.to_str().unwrap()])
        .env("SLLN_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    // the flag outranks the environment
    let o = Command::new(env!("CARGO_BIN_EXE_slln"))
        .args([
            "simulate",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--budget",
            "200000",
        ])
        .env("SLLN_BUDGET", "1000")
        .output()
        .unwrap();
    assert_ne!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn simulate_writes_reproducible_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", SMALL);
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec![
            "simulate",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--threads",
            "1",
        ];
        args.extend_from_slice(extra);
        let o = slln(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        out
    };
    let a = run("a", &[]);
    let b = run("b", &[]);
    let c = run("c", &["--seed", "7"]);
    for f in [
        "summary.txt",
        "checkpoints.csv",
        "aggregate.csv",
        "manifest.txt",
        "config.toml",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    assert_ne!(
        fs::read(a.join("checkpoints.csv")).unwrap(),
        fs::read(c.join("checkpoints.csv")).unwrap()
    );

    let manifest = fs::read_to_string(c.join("manifest.txt")).unwrap();
    let config = fs::read(c.join("config.toml")).unwrap();
    let digest: String = Sha256::digest(&config)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert!(manifest.contains(&format!("config_sha256={digest}")));
    assert!(manifest.contains("master_seed=7"));
    // the recorded config alone reproduces the run
    let again = dir.path().join("again");
    let o = slln(&[
        "simulate",
        "--config",
        c.join("config.toml").to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read(c.join("summary.txt")).unwrap(),
        fs::read(again.join("summary.txt")).unwrap()
    );

    let csv = fs::read_to_string(a.join("checkpoints.csv")).unwrap();
    assert!(csv.starts_with("replica,n,S_over_n,kappa_n,checkpoint_index\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 1 + 20 * 7);
}

#[test]
fn simulate_exit_codes_follow_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = slln(&[
        "simulate",
        "--config",
        &emit(dir.path(), "kolmogorov_iid"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = slln(&[
        "simulate",
        "--config",
        &emit(dir.path(), "counterexample_dense"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("verdict: diverging"));
}

#[test]
fn validate_proof_surfaces_moment_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.toml",
        &SMALL.replace("beta = 0.8", "beta = 0.4"),
    );
    let out = dir.path().join("o");
    let o = slln(&[
        "validate-proof",
        "--config",
        &bad,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let text = fs::read_to_string(out.join("proof.txt")).unwrap();
    assert!(text.contains("moment: violated"));
    assert!(text.contains("passed: false"));

    let good = write(dir.path(), "good.toml", SMALL);
    let o = slln(&["validate-proof", "--config", &good]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}
