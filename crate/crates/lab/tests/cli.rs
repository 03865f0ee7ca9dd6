use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const ROTATION_RUN: &str = r#"{
    "system": {"name": "rotation", "map": {"kind": "rotation", "alpha": 0.41421356237309515}},
    "target": "hyperspace",
    "protocol": {"sampler": {"kind": "grid", "delta": 0.03125},
                 "eps": [0.2, 0.1], "n": [8, 16, 32, 64]},
    "seed": 11
}"#;

#[test]
fn systems_list_names_builtins() {
    let out = hpol(&["systems", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["rotation", "arnold", "rational_ms", "denjoy"] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains("cantor"));
}

#[test]
fn estimate_writes_deterministic_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", ROTATION_RUN);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, threads) in [(&a, "1"), (&b, "2")] {
        let o = hpol(&["--out", out.to_str().unwrap(), "--threads", threads, "estimate", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["report.json", "growth.csv", "growth.dat"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.join("growth.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4);
    let report: serde_json::Value = serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 11);
    assert!(report["estimate"]["estimate"].as_f64().unwrap() < 0.25);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(!fs::read_to_string(a.join("report.json")).unwrap().contains("seconds"));
    assert!(a.join("timings.json").exists());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", ROTATION_RUN);
    let out = dir.path().join("o");
    let o = hpol(&["--out", out.to_str().unwrap(), "--seed", "5", "estimate", "--config", &cfg]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 5);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();

    let no_seed = ROTATION_RUN.replace("\"seed\": 11", "\"extra\": 0");
    let cfg = write(dir.path(), "no_seed.json", &no_seed);
    assert_eq!(hpol(&["--out", out, "estimate", "--config", &cfg]).status.code(), Some(2));

    let over = ROTATION_RUN.replace("\"n\": [8, 16, 32, 64]}", "\"n\": [8, 16, 32, 64], \"budget\": {\"max_sample\": 10, \"max_horizon\": 1000, \"max_stored_values\": 1000000}}");
    let cfg = write(dir.path(), "over.json", &over);
    let o = hpol(&["--out", out, "estimate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));

    let bad_eps = ROTATION_RUN.replace("[0.2, 0.1]", "[-0.2]");
    let cfg = write(dir.path(), "bad.json", &bad_eps);
    assert_eq!(hpol(&["--out", out, "estimate", "--config", &cfg]).status.code(), Some(2));

    assert_eq!(hpol(&["--out", out, "estimate", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(hpol(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hpol(&["verify", "--check", "everything"]).status.code(), Some(2));
    assert!(!Path::new(out).join("report.json").exists());
}

#[test]
fn verify_single_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = write(dir.path(), "v.json", r#"{"isometry": {"alpha": 0.3, "trials": 500}}"#);
    let o = hpol(&["--out", out.to_str().unwrap(), "verify", "--check", "isometry", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let lines = fs::read_to_string(out.join("verdicts.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(v["check"], "isometry");
    assert_eq!(v["pass"], true);
    for key in ["params", "expected", "measured"] {
        assert!(v.get(key).is_some());
    }
}

#[test]
fn failed_check_exits_one() {
    // Grid arcs of a Morse-Smale map collapse onto the fixed points, so the
    // hyperspace slope stays near 0 instead of 2.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = write(
        dir.path(),
        "v.json",
        r#"{"classify": [{
            "system": {"name": "arnold", "map": {"kind": "arnold", "omega": 0.0, "k": 0.8}},
            "hyperspace": {"sampler": {"kind": "grid", "delta": 0.0625}, "eps": [0.1], "n": [8, 16, 32, 64]}
        }]}"#,
    );
    let o = hpol(&["--out", out.to_str().unwrap(), "verify", "--check", "classify", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL classify/arnold"));
    let csv = fs::read_to_string(out.join("growth.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
}
