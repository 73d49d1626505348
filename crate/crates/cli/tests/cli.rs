use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn vtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vtwist")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn documented_exit_codes() {
    for (name, code) in [
        ("sl2-half-h.json", 0),
        ("third-h.json", 0),
        ("weyl-transport.json", 0),
        ("grading-counterexample.json", 2),
        ("nilpotent-grading.json", 3),
        ("critical-level.json", 10),
        ("a2-flip-not-fixed.json", 11),
        ("field-extension.json", 12),
        ("a2-flip-unsupported.json", 13),
    ] {
        let out = vtwist(&["run", &config(name)]);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        if code >= 10 {
            assert_eq!(v["error"]["exitStatus"], code);
        } else {
            assert_eq!(v["exitStatus"], code);
        }
    }
}

#[test]
fn grading_counterexample_witness() {
    let out = vtwist(&["run", &config("grading-counterexample.json")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let g = checks.iter().find(|c| c["name"] == "gradingRestriction").unwrap();
    assert_eq!(g["status"], "fail");
    assert_eq!(g["witness"]["v"], "e(-1)^k 1");
    assert_eq!(g["witness"]["exponent"], "weight 1/2");
}

#[test]
fn bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = vtwist(&["run", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(74));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{ "schemaVersion": 1 }"#).unwrap();
    let out = vtwist(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "InvalidConfig");
}

#[test]
fn csv_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = vtwist(&["run", &config("sl2-half-h.json"), "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().get(2), Some("status"));
    assert!(reader.records().all(|r| &r.unwrap()[2] == "pass"));
}

#[test]
fn tables_command() {
    let out = vtwist(&["tables", &config("third-h.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.get("checks").is_none());
    assert!(!v["gradedDimensions"].as_array().unwrap().is_empty());
    assert!(!v["modeTables"].as_array().unwrap().is_empty());
    let csv_out = vtwist(&["tables", &config("third-h.json"), "--format", "csv"]);
    assert!(String::from_utf8(csv_out.stdout).unwrap().starts_with("section,stage,"));
}

#[test]
fn reruns_are_identical() {
    let a = vtwist(&["run", &config("third-h.json")]);
    let b = vtwist(&["run", &config("third-h.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn shipped_configs_round_trip() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let c = vtwist_cli::load_config(&path).unwrap();
        assert_eq!(vtwist_cli::RunConfig::from_json(&c.to_json()).unwrap(), c, "{}", path.display());
    }
}
