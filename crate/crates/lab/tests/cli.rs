//! End-to-end CLI checks against the built binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mirror-lab"))
}

#[test]
fn sample_run_roundtrip() {
    let dir = std::env::temp_dir().join(format!("mirror-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let circuit = dir.join("circuit.json");
    let out = bin()
        .args(["sample", "--gate-set", "clifford", "-n", "6", "-l", "4", "-p", "0.3", "--seed", "11"])
        .arg("--out")
        .arg(&circuit)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&circuit).unwrap();
    assert!(text.starts_with("{\"version\":1"));

    let out = bin()
        .arg("run")
        .arg("--circuit")
        .arg(&circuit)
        .args(["-d", "4"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["n"], 6);
    assert_eq!(report["d"], 4);
    let f = report["f"].as_f64().unwrap();
    assert!((0.0..=1.0 + 1e-9).contains(&f));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_writes_csv_and_plots() {
    let dir = std::env::temp_dir().join(format!("mirror-lab-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{
            "gate_set": "clifford",
            "n": [6],
            "d": [2],
            "p": [0.2, 0.4],
            "samples": 2,
            "master_seed": 3,
            "record_timing": false
        }"#,
    )
    .unwrap();
    let out = bin()
        .arg("sweep")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("results.csv")).unwrap();
    assert!(csv.starts_with(mirror_lab::csvio::CSV_HEADER));
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(dir.join("fidelity.svg").exists());
    assert!(dir.join("entropy_bound.svg").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mirror_subcommand_converts_mps_files() {
    use mirror_core::mps::Mps;
    use mirror_core::rng::{instance_rng, Stream};
    let dir = std::env::temp_dir().join(format!("mirror-lab-mps-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mps_path = dir.join("state.mps");
    let mut rng = instance_rng(5, Stream::Circuit);
    let mps = Mps::<f64>::random(7, 4, &mut rng).unwrap();
    let mut blob = Vec::new();
    mps.export(&mut blob).unwrap();
    std::fs::write(&mps_path, blob).unwrap();
    let out = bin().arg("mirror").arg("--mps").arg(&mps_path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let gates: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(gates["n"], 7);
    assert!(gates["gates"].as_array().unwrap().len() >= 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn run_export_feeds_the_mirror_converter() {
    let dir = std::env::temp_dir().join(format!("mirror-lab-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mps_path = dir.join("state.mps");
    let out = bin()
        .args(["run", "--gate-set", "clifford", "-n", "8", "-p", "0.3", "-d", "4", "--seed", "21"])
        .arg("--export-mps")
        .arg(&mps_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().arg("mirror").arg("--mps").arg(&mps_path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let gates: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(gates["n"], 8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = bin().args(["verify", "definitely-not-a-suite"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown suite"), "{err}");
}
