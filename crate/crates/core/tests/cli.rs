use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spin2-verify"))
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, json).unwrap();
    p
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

const MINKOWSKI: &str =
    r#"{"metric": {"name": "minkowski"}, "n_points": 3, "couplings": [0.0], "checks": ["flat", "geometry"]}"#;

#[test]
fn run_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINKOWSKI);
    let out = dir.path().join("report.json");
    let o = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["summary"]["passed"], true);
    assert_eq!(report["records"].as_array().unwrap().len(), 2 * 3);
    assert_eq!(report["versions"]["schema"], 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS flat"));
}

#[test]
fn overrides_replace_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINKOWSKI);
    let o = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args([
            "--metric",
            "schwarzschild",
            "--param",
            "M=2",
            "--points",
            "2",
            "--seed",
            "5",
        ])
        .args(["--coupling", "0,0.5", "--check", "uniqueness", "--tolerance", "1e-8"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["config"]["metric"]["params"]["M"], 2.0);
    assert_eq!(report["config"]["seed"], 5);
    assert_eq!(report["config"]["tolerance"], 1e-8);
    assert_eq!(report["records"].as_array().unwrap().len(), 2 * 2);
}

#[test]
fn failing_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"metric": {"name": "frw"}, "n_points": 2, "couplings": [0.0], "tolerance": 1e-30, "checks": ["rank2_chain"]}"#,
    );
    let o = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["summary"]["passed"], false);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINKOWSKI);
    let cases: Vec<Vec<&str>> = vec![
        vec!["--points", "0"],
        vec!["--metric", "kerr"],
        vec!["--param", "M"],
        vec!["--check", "bogus"],
        vec!["--metric", "frw"],
        vec!["--tolerance", "-1"],
        vec!["--no-such-flag"],
    ];
    for extra in cases {
        let o = bin().args(["run", "--config"]).arg(&cfg).args(&extra).output().unwrap();
        assert_eq!(code(&o), 2, "{extra:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = bin()
        .args(["run", "--config", "/nonexistent/config.json"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"metric": {"name": "frw"}, "checks": ["flat"], "unknown": 1}"#).unwrap();
    let o = bin().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown"));
}

#[test]
fn thread_cap_is_validated_and_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINKOWSKI);
    let o = bin()
        .env("SPIN2_THREADS", "zero")
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["summary"]["wall_time_s"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let one = strip(
        bin()
            .env("SPIN2_THREADS", "1")
            .args(["run", "--config"])
            .arg(&cfg)
            .output()
            .unwrap(),
    );
    let many = strip(
        bin()
            .env("SPIN2_THREADS", "4")
            .args(["run", "--config"])
            .arg(&cfg)
            .output()
            .unwrap(),
    );
    assert_eq!(one, many);
}

#[test]
fn sweep_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"metric": {"name": "de_sitter"}, "n_points": 2, "checks": ["geometry"]}"#,
    );
    let out = dir.path().join("sweep.json");
    let o = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--steps", "1e-2,5e-3,2.5e-3", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
    for q in r["quantities"].as_array().unwrap() {
        assert_eq!(q["status"], "converged");
    }
    let o = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--steps", "1e-2,5e-3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let c = spin2_core::verify::ScenarioConfig::from_file(&path).unwrap();
        c.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 3);
}
