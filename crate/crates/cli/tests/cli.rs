use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use simbias::formats::HarvestRecord;
use simbias::report::RankedReport;

fn simbias(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simbias")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const SWEEP: &str = r#"{"trials": 64, "input_bits": 4, "seed": 5, "top_k": 1, "configs": [
  {"label": "flat", "architecture": "EncoderClassifier", "sam_kind": "Classical", "init": "Zeros"},
  {"label": "rand", "architecture": "EncoderClassifier", "sam_kind": "Classical", "init": "N"},
  {"label": "q", "architecture": "DecoderCore", "sam_kind": "V1", "init": "XB", "qubits": 3,
   "encoding": "Amplitude", "measurement": "SingleZ", "attention": "Gaussian"}
]}"#;

#[test]
fn lz_prints_six_decimals() {
    let out = simbias(&["lz", "00000000000000000000000000000000"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "5.000000\n");
    let out = simbias(&["lz", "01"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2.000000\n");
}

#[test]
fn errors_are_json_objects() {
    let out = simbias(&["lz", "0120"]);
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "compute");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"configs": [{"label": "g4", "architecture": "SamGanGeneratorCore", "sam_kind": "V4", "init": "N"}]}"#,
    );
    let out = simbias(&["run", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "config");
    assert_eq!(v["error"]["label"], "g4");
    assert!(v["error"]["message"].as_str().unwrap().contains("V3"));

    let out = simbias(&["run", "--config", "/nonexistent/spec.json"]);
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn run_report_and_zero_sentinel() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SWEEP);
    let report_path = dir.path().join("report.json");
    let hist = dir.path().join("hist");
    let out = simbias(&[
        "run",
        "--config",
        &spec,
        "--out",
        report_path.to_str().unwrap(),
        "--hist-dir",
        hist.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: RankedReport = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();

    assert_eq!(report.c_min, 4.0);
    assert_eq!(report.configs.len(), 3);
    let flat = report.find("flat").unwrap();
    assert!((flat.auc - (report.c_max - report.c_min)).abs() < 1e-12);
    assert_eq!(flat.exp, 1.0 / 64.0);
    assert_eq!(report.selected, ["flat"]);
    for w in report.configs.windows(2) {
        assert!(w[0].auc > w[1].auc || (w[0].auc == w[1].auc && w[0].label < w[1].label));
    }
    for c in &report.configs {
        assert!(hist.join(format!("{}.csv", c.label)).exists());
        let mass: f64 = c.histogram.iter().map(|b| b.probability).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    let out = simbias(&["run", "--config", &spec, "--format", "csv", "--trials", "16", "--top-k", "2"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("label,auc,exp,params\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn harvest_dump() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SWEEP);
    let out = simbias(&["harvest", "--config", &spec, "--label", "q", "--trials", "10", "--bits", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: HarvestRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((rec.label.as_str(), rec.n, rec.trials, rec.seed), ("q", 3, 10, 5));
    assert!(rec.functions.iter().all(|f| f.len() == 2));
    assert_eq!(rec.decode().unwrap().len(), 10);

    let out = simbias(&["harvest", "--config", &spec]);
    assert!(!out.status.success());
}

#[test]
fn correlate_identity() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", SWEEP);
    let report_path = dir.path().join("report.json");
    let out = simbias(&["run", "--config", &spec, "--out", report_path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: RankedReport = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();

    let mut csv = String::from("label,same,flipped\n");
    for c in &report.configs {
        csv.push_str(&format!("{},{},{}\n", c.label, c.auc, -c.auc));
    }
    let perf = write(dir.path(), "perf.csv", &csv);
    let out = simbias(&["correlate", "--report", report_path.to_str().unwrap(), "--performance", &perf]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(m["rows"][0], "auc");
    assert_eq!(m["cells"][0][0]["rho"], 1.0);
    assert_eq!(m["cells"][0][1]["rho"], -1.0);

    let short = write(dir.path(), "short.csv", "label,acc\nflat,1\nrand,2\n");
    let out = simbias(&["correlate", "--report", report_path.to_str().unwrap(), "--performance", &short]);
    assert!(!out.status.success());
}

#[test]
fn variants_json() {
    let out = simbias(&["variants"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["EncoderDecoder"].as_array().unwrap().len(), 5);
    assert_eq!(v["SamGan"][0]["encoding"], "Angle");
    assert_eq!(v["EncoderDecoder"][4]["query_key_measurement"], "Anticommuting");
}
