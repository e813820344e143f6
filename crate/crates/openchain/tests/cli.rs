//! End-to-end command-line tests: exit codes, output shapes, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_openchain")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn base_config() -> &'static str {
    r#"{
        "eta": [1.0, 0.0],
        "length": 2,
        "right": {"kind": "triangular", "a": [1.0, 0.0], "b": [0.3, 0.0], "c": [0.7, 0.0]},
        "left": {"kind": "triangular", "a": [2.0, 0.0], "b": [1.0, 0.0], "c": [1.0, 0.0]},
        "n_range": [0, 2],
        "seed": 7,
        "solver": {"starts": 80, "newton_tol": 1e-11, "max_iter": 100, "allow_excitations_above_length": false}
    }"#
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    cmd.env_remove("OPENCHAIN_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("openchain-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_subset_exits_zero_with_report() {
    let dir = tempdir("check");
    let config = write_config(&dir, "config.json", base_config());
    let out_path = dir.join("report.json");
    let output = run(
        &[
            "check",
            "--config",
            config.to_str().unwrap(),
            "--suite",
            "ybe,unitarity,dual_reflection",
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["report"]["summary"]["total"], 3);
    assert_eq!(report["report"]["summary"]["all_normative_passed"], true);
    assert!(report["metadata"]["unix_time"].as_u64().is_some());
}

#[test]
fn check_malformed_config_exits_two() {
    let dir = tempdir("badcfg");
    let config = write_config(&dir, "bad.json", "{\"eta\": [1.0, 0.0]}");
    let output = run(&["check", "--config", config.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(2));
    let missing = dir.join("missing.json");
    let output = run(&["check", "--config", missing.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn check_failing_tolerance_exits_one() {
    let dir = tempdir("tolfail");
    let config = write_config(&dir, "config.json", base_config());
    // An impossible tolerance forces a normative failure.
    let output = run(
        &[
            "check",
            "--config",
            config.to_str().unwrap(),
            "--suite",
            "ybe",
            "--tol",
            "ybe=1e-30",
        ],
        &[],
    );
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn report_bytes_reproducible_for_fixed_seed() {
    let dir = tempdir("repro");
    let config = write_config(&dir, "config.json", base_config());
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for out in [&a, &b] {
        let output = run(
            &[
                "check",
                "--config",
                config.to_str().unwrap(),
                "--suite",
                "ybe,vacuum,reflection",
                "--seed",
                "123",
                "--out",
                out.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(output.status.code(), Some(0));
    }
    let ja: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let jb: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    // The deterministic payload is byte-identical; only metadata may differ.
    assert_eq!(
        serde_json::to_string(&ja["report"]).unwrap(),
        serde_json::to_string(&jb["report"]).unwrap()
    );
}

#[test]
fn env_seed_overrides_config_and_flag_beats_env() {
    let dir = tempdir("seed");
    let config = write_config(&dir, "config.json", base_config());
    let out_env = dir.join("env.json");
    let output = run(
        &[
            "check",
            "--config",
            config.to_str().unwrap(),
            "--suite",
            "ybe",
            "--out",
            out_env.to_str().unwrap(),
        ],
        &[("OPENCHAIN_SEED", "999")],
    );
    assert_eq!(output.status.code(), Some(0));
    let j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_env).unwrap()).unwrap();
    assert_eq!(j["report"]["config_seed"], 999);

    let out_flag = dir.join("flag.json");
    let output = run(
        &[
            "check",
            "--config",
            config.to_str().unwrap(),
            "--suite",
            "ybe",
            "--seed",
            "5",
            "--out",
            out_flag.to_str().unwrap(),
        ],
        &[("OPENCHAIN_SEED", "999")],
    );
    assert_eq!(output.status.code(), Some(0));
    let j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_flag).unwrap()).unwrap();
    assert_eq!(j["report"]["config_seed"], 5);
}

#[test]
fn solve_writes_json_and_csv() {
    let dir = tempdir("solve");
    let config = write_config(&dir, "config.json", base_config());
    let out_path = dir.join("solve.json");
    let output = run(
        &[
            "solve",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let states = j["report"]["states"].as_array().unwrap();
    assert!(!states.is_empty());
    assert_eq!(states[0]["n"], 0); // pseudo-vacuum row always present
    let csv = std::fs::read_to_string(dir.join("solve.csv")).unwrap();
    assert!(csv.starts_with("state_id,N,probe_re,probe_im,lambda_re,lambda_im,residual\n"));
    assert_eq!(csv.trim().lines().count(), 1 + 5 * states.len());
}

#[test]
fn triangularize_exit_codes() {
    let dir = tempdir("tri");
    // A left boundary proportional to the identity is compatible with any
    // right boundary; the constraint vanishes identically.
    let on_surface = r#"{
        "eta": [1.0, 0.0],
        "length": 1,
        "right": {"kind": "general", "alpha": [1.2, 0.0], "beta": [2.0, 0.0], "gamma": [3.0, 0.0], "delta": [1.0, 0.0]},
        "left": {"kind": "general", "alpha": [2.0, 0.0], "beta": [0.0, 0.0], "gamma": [0.0, 0.0], "delta": [0.0, 0.0]},
        "seed": 1
    }"#;
    let config = write_config(&dir, "on.json", on_surface);
    let out_path = dir.join("tri.json");
    let output = run(
        &[
            "triangularize",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(output.status.code(), Some(0));
    let j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(j["report"]["triangularizable"], true);
    assert_eq!(j["report"]["parameter_map"]["passed"], true);

    let off_surface = r#"{
        "eta": [1.0, 0.0],
        "length": 1,
        "right": {"kind": "general", "alpha": [1.0, 0.0], "beta": [0.0, 0.0], "gamma": [1.0, 0.0], "delta": [0.0, 0.0]},
        "left": {"kind": "general", "alpha": [1.0, 0.0], "beta": [0.0, 0.0], "gamma": [0.0, 0.0], "delta": [1.0, 0.0]},
        "seed": 1
    }"#;
    let config = write_config(&dir, "off.json", off_surface);
    let output = run(
        &["triangularize", "--config", config.to_str().unwrap()],
        &[],
    );
    assert_eq!(output.status.code(), Some(1));
    let stdout: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(stdout["report"]["triangularizable"], false);
    assert_eq!(stdout["report"]["constraint_value"][0], 1.0);
}

#[test]
fn hamiltonian_and_spectrum_commands() {
    let dir = tempdir("hs");
    let config = write_config(&dir, "config.json", base_config());
    let output = run(&["hamiltonian", "--config", config.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(j["report"]["dimension"], 4);
    assert!(j["report"]["derivative_residual"].as_f64().unwrap() < 1e-6);

    let output = run(&["spectrum", "--config", config.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(j["report"]["probes"].as_array().unwrap().len(), 3);
    assert_eq!(
        j["report"]["probes"][0]["eigenvalues"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
}
