use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_harvest-noma"));
    for (k, _) in std::env::vars() {
        if k.starts_with("HARVEST_NOMA_") {
            c.env_remove(k);
        }
    }
    c
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn bad_flag_is_a_config_error() {
    let out = bin().args(["radius", "--bogus"]).output().unwrap();
    assert_eq!(code(&out), 2);
    let out = bin().args(["radius", "--mode", "fast"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_parameters_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "alpha = 2\n").unwrap();
    let out = bin()
        .args(["radius", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));

    let out = bin().args(["radius", "--config", "/nonexistent/run.toml"]).output().unwrap();
    assert_eq!(code(&out), 2);

    let out = bin().arg("radius").env("HARVEST_NOMA_TRIALS", "many").output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("taken");
    std::fs::write(&file, "x").unwrap();
    let cfg = dir.path().join("tiny.toml");
    std::fs::write(&cfg, "[radius]\nlambda_B = [30]\nT = [0.01]\n[run]\nnumeric_trials = 50\n").unwrap();
    let out = bin()
        .args(["radius", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn tiny_run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.toml");
    std::fs::write(
        &cfg,
        "[pmf]\nlambda_B = [30]\n[throughput]\nT = [0.1, 0.2]\nlambda_B = [20]\n[run]\ntrials = 20\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    for cmd in ["pmf", "throughput"] {
        let out = bin()
            .arg(cmd)
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(out_dir.join(format!("{cmd}.csv")).exists());
    }
    let csv = std::fs::read_to_string(out_dir.join("throughput.csv")).unwrap();
    assert!(csv.starts_with("row_kind,lambda_B,T,"), "{csv}");
    assert!(out_dir.join("manifest.toml").exists());
}
