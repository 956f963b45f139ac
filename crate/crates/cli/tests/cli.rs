//! End-to-end tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn overcode() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_overcode"));
    cmd.env_remove("OVERCODE_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    overcode().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn write_config(dir: &Path, seed: u64) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    let users: Vec<serde_json::Value> = (0..10)
        .map(|i| {
            serde_json::json!({
                "class": if i < 4 { "machine_type" } else { "best_effort" },
                "sending_probability": 0.5,
            })
        })
        .collect();
    let config = serde_json::json!({
        "sf": 8,
        "iterations": 50,
        "packet_bits": 16,
        "snr_db": 10.0,
        "snr_reference": "chip",
        "seed": seed,
        "modulation": "qpsk",
        "fec": "none",
        "users": users,
        "mode": "proposed",
    });
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn codes_prints_set_and_correlation_matrix() {
    let output = run(&["codes", "--sf", "8", "--extras", "all"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("cross-correlation matrix"));
    // 12 sequences: 4 upper, 4 lower base, 4 extras -> a 12x12 matrix.
    let matrix: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("cross-correlation"))
        .skip(1)
        .collect();
    assert_eq!(matrix.len(), 12);
    // Extras (rows 8..12) are orthogonal to the upper block (columns 0..4).
    for row in &matrix[8..] {
        let cells: Vec<&str> = row.split(' ').collect();
        assert_eq!(cells.len(), 12);
        assert!(cells[..4].iter().all(|c| *c == "0"), "row {row:?}");
    }
}

#[test]
fn codes_rejects_bad_arguments() {
    assert_eq!(run(&["codes", "--sf", "7"]).status.code(), Some(2));
    assert_eq!(run(&["codes", "--sf", "8", "--extras", "nine"]).status.code(), Some(2));
    assert_eq!(run(&["codes"]).status.code(), Some(2));
}

#[test]
fn run_missing_config_exits_2() {
    let output = run(&["run", "--config", "missing.json"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&output.stderr).is_empty());
}

#[test]
fn run_emits_consistent_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 7);
    let output = run(&["run", "--config", config.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sweep_value,class,transmitted_bits,bit_errors,ber,stderr,ber_paper_norm"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 7);
        assert!(cells[0].is_empty());
        let bits: f64 = cells[2].parse().unwrap();
        let errors: f64 = cells[3].parse().unwrap();
        if !cells[4].is_empty() {
            let ber: f64 = cells[4].parse().unwrap();
            assert!((ber - errors / bits).abs() < 1e-12);
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 42);
    let args = ["run", "--config", config.to_str().unwrap(), "--workers", "2"];
    let first = run(&args);
    let second = overcode().args(["run", "--config", config.to_str().unwrap(), "--workers", "7"])
        .output()
        .unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn seed_precedence_flag_env_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 1);
    let arg = config.to_str().unwrap();

    let by_file = run(&["run", "--config", arg]);
    let by_env = overcode()
        .args(["run", "--config", arg])
        .env("OVERCODE_SEED", "2")
        .output()
        .unwrap();
    let by_flag = overcode()
        .args(["run", "--config", arg, "--seed", "3"])
        .env("OVERCODE_SEED", "2")
        .output()
        .unwrap();
    let seed_3_config = write_config(dir.path(), 3);
    let by_file_3 = run(&["run", "--config", seed_3_config.to_str().unwrap()]);

    assert_ne!(by_file.stdout, by_env.stdout, "env overrides the file seed");
    assert_eq!(by_flag.stdout, by_file_3.stdout, "flag overrides the env seed");
}

#[test]
fn set_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 5);
    let arg = config.to_str().unwrap();

    let plain = run(&["run", "--config", arg]);
    let louder = run(&["run", "--config", arg, "--set", "snr_db=0"]);
    assert!(louder.status.success());
    assert_ne!(plain.stdout, louder.stdout);

    let bad = run(&["run", "--config", arg, "--set", "bandwidth=5"]);
    assert_eq!(bad.status.code(), Some(2));
    let malformed = run(&["run", "--config", arg, "--set", "snr_db"]);
    assert_eq!(malformed.status.code(), Some(2));
}

#[test]
fn json_format_is_structured() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 6);
    let output = run(&["run", "--config", config.to_str().unwrap(), "--format", "json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["iterations"], 50);
    assert_eq!(report["per_user"].as_array().unwrap().len(), 10);
}

#[test]
fn sweep_fig4_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 9);
    let out_path = dir.path().join("sweep.csv");
    let output = run(&[
        "sweep",
        "--preset",
        "fig4",
        "--config",
        config.to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    // 21 SNR points x (machine_type + best_effort + one baseline class row).
    assert_eq!(rows.len(), 21 * 3);
    assert_eq!(rows.iter().filter(|r| r.contains(",baseline,")).count(), 21);
    for class in ["machine_type", "best_effort"] {
        assert_eq!(rows.iter().filter(|r| r.contains(&format!(",{class},"))).count(), 21);
    }

    assert_eq!(run(&["sweep", "--preset", "fig9"]).status.code(), Some(2));
}

#[test]
fn validate_passes() {
    let output = run(&["validate"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("all invariants hold"));
}
