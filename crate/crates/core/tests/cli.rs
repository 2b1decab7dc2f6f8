use std::path::PathBuf;
use std::process::Command;

use steercert::lp::Status;
use steercert::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steercert"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

#[test]
fn singlet_cjwr_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = bin()
        .args(["singlet-cjwr", "--settings", "2", "--mesh", "162", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = RunReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((report.witness_values["F"] - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(report.verdict("lhs").unwrap().status, Status::Infeasible);
    assert_eq!(report.inputs["mesh"], serde_json::json!(162));
    assert_eq!(report.predictability.len(), 4);
}

#[test]
fn werner_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let status = bin()
        .args(["werner-scan", "--grid", "11", "--mesh", "42", "--csv"])
        .arg(&csv)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["p", "F", "verdict"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(&rows[0][2], "feasible");
    assert_eq!(&rows[10][2], "infeasible");
    let f: f64 = rows[10][1].parse().unwrap();
    assert!((f - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn prbox_exact_mode() {
    let out = bin().args(["prbox", "--mode", "exact"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("chsh = 4\n"));
    assert!(text.contains("CHSH 4 > 2√2 ≈ 2.8284"));
}

#[test]
fn reid_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("reid.csv");
    let status = bin().args(["reid", "--r", "0.69", "--sweep", "0:2:0.1", "--csv"]).arg(&csv).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let products: Vec<f64> = csv::Reader::from_path(&csv)
        .unwrap()
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    assert_eq!(products.len(), 21);
    assert!(products.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(bin().args(["reid", "--r", "-1"]).status().unwrap().code(), Some(1));
    assert_eq!(bin().args(["singlet-cjwr", "--settings", "5"]).status().unwrap().code(), Some(1));
    assert_eq!(bin().args(["singlet-cjwr", "--mode", "exact"]).status().unwrap().code(), Some(1));
    assert_eq!(bin().args(["no-such-command"]).status().unwrap().code(), Some(1));
    assert_eq!(bin().args(["check", "/nonexistent/file.json"]).status().unwrap().code(), Some(1));
}

#[test]
fn check_reports_schema_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"dimA\": 2,\n  \"dimB\": 2,\n  \"state\": {\"kind\": \"bell\"}\n}\n").unwrap();
    let out = bin().arg("check").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn check_rejects_non_psd_effect_as_input_error() {
    let text = std::fs::read_to_string(scenario("singlet_xz.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["alice_povms"][0][0][0][0] = serde_json::json!([1.5, 0.0]);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = bin().arg("check").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn seed_is_reproducible() {
    let run = || {
        let out = bin().args(["singlet-cjwr", "--seed", "11", "--mesh", "42"]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap().lines().filter(|l| !l.contains("time")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(run(), run());
}
