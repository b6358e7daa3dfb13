//! End-to-end tests of the `stackline` binary: subcommand flow, exit
//! codes, overrides, and the thread-count environment variable.

use std::path::Path;
use std::process::{Command, Output};

fn stackline(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stackline"));
    cmd.current_dir(dir).args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let config = serde_json::json!({
        "input": dir.join("data.csv"),
        "output_dir": dir.join("out"),
        "synth": { "n_rows": 400, "missing_rate": 0.02 },
        "stacking": { "n_folds": 3 },
        "learners": {
            "mlp_epochs": 60,
            "logreg_epochs": 200,
            "meta_epochs": 500,
            "svm_epochs": 60,
            "adaboost_rounds": 10,
            "gradboost_rounds": 20
        }
    });
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn full_subcommand_flow() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let cfg = config.to_str().unwrap();

    for (args, needle) in [
        (vec!["synth", "--config", cfg], "wrote"),
        (vec!["preprocess", "--config", cfg], "cleaned"),
        (vec!["select", "--config", cfg], "kept"),
        (vec!["train", "--config", cfg], "model.json"),
        (
            vec!["evaluate", "--config", cfg, "--split", "test"],
            "accuracy",
        ),
        (vec!["compare", "--config", cfg], "Stacking Ensemble"),
    ] {
        let out = stackline(dir.path(), &args, &[]);
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(stdout.contains(needle), "{args:?} stdout: {stdout}");
    }

    // predict on the generated input itself.
    let out = stackline(
        dir.path(),
        &[
            "predict",
            "--config",
            cfg,
            "--input",
            dir.path().join("out/train.csv").to_str().unwrap(),
            "--output",
            dir.path().join("preds.csv").to_str().unwrap(),
        ],
        &[],
    );
    assert!(
        out.status.success(),
        "predict failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let preds = std::fs::read_to_string(dir.path().join("preds.csv")).unwrap();
    assert!(preds.lines().next().unwrap().ends_with("proba,predicted_label"));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let cfg = config.to_str().unwrap();

    // Usage error from clap: exit 2.
    let out = stackline(dir.path(), &["no-such-command"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // Missing input file: exit 2, no partial artifacts.
    let out = stackline(dir.path(), &["preprocess", "--config", cfg], &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("out").exists());

    // Missing config file: exit 2.
    let out = stackline(dir.path(), &["select", "--config", "nope.json"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // Stage order violated (select before preprocess): exit 2 with a hint.
    stackline(dir.path(), &["synth", "--config", cfg], &[]);
    let out = stackline(dir.path(), &["select", "--config", cfg], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("preprocess"));

    // Data error (alpha too small leaves nothing selected): exit 1.
    stackline(dir.path(), &["preprocess", "--config", cfg], &[]);
    let out = stackline(
        dir.path(),
        &["select", "--config", cfg, "--set", "alpha=1e-300"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn overrides_change_behavior() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let cfg = config.to_str().unwrap();
    stackline(dir.path(), &["synth", "--config", cfg], &[]);
    stackline(dir.path(), &["preprocess", "--config", cfg], &[]);
    stackline(dir.path(), &["select", "--config", cfg], &[]);
    let out = stackline(
        dir.path(),
        &["train", "--config", cfg, "--set", "stacking.n_folds=4"],
        &[],
    );
    assert!(out.status.success());
    let model: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/model.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(model["config"]["n_folds"], 4);
}

#[test]
fn thread_env_var_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path());
    let cfg = config.to_str().unwrap();
    stackline(dir.path(), &["synth", "--config", cfg], &[]);
    stackline(dir.path(), &["preprocess", "--config", cfg], &[]);
    stackline(dir.path(), &["select", "--config", cfg], &[]);

    let serial = stackline(
        dir.path(),
        &["train", "--config", cfg],
        &[("STACKLINE_THREADS", "0")],
    );
    assert!(serial.status.success());
    let serial_model = std::fs::read(dir.path().join("out/model.json")).unwrap();

    let threaded = stackline(
        dir.path(),
        &["train", "--config", cfg],
        &[("STACKLINE_THREADS", "4")],
    );
    assert!(threaded.status.success());
    let threaded_model = std::fs::read(dir.path().join("out/model.json")).unwrap();
    assert_eq!(serial_model, threaded_model);
}

#[test]
fn compare_requires_config_or_paper_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = stackline(dir.path(), &["compare"], &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = stackline(
        dir.path(),
        &["compare", "--paper-data", "missing.csv"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}
