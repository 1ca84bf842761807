use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gaussent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussent"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const TMSV_HALF: &str = r#"{"n1": 0.2715403174076219, "n2": 0.2715403174076219, "m1": [0, 0], "m2": [0, 0],
    "ms": [0, 0], "mc": [0.5876005968219007, 0]}"#;

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&gaussent(&["--help"])), 0);
    assert_eq!(code(&gaussent(&["--version"])), 0);
    assert_eq!(code(&gaussent(&["simulate", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&gaussent(&[])), 1);
    assert_eq!(code(&gaussent(&["frobnicate"])), 1);
    assert_eq!(code(&gaussent(&["simulate", "--family", "tmsv"])), 1);
    assert_eq!(
        code(&gaussent(&[
            "simulate", "--family", "tmsv", "--r", "0.5", "--n", "1"
        ])),
        1
    );
    assert_eq!(code(&gaussent(&["analyze", "/nonexistent/state.json"])), 1);
}

#[test]
fn analyze_reports_entangled_state() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "s.json", TMSV_HALF);
    let out = dir.path().join("report.json");
    let o = gaussent(&["analyze", &state, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["physical"]["uncertainty"], true);
    assert_eq!(v["p_representable"], false);
    let r = &v["report"];
    assert_eq!(r["separable"], false);
    assert!(r["eof_bits"].as_f64().unwrap() > 0.5);
    assert!(v["local_pipeline"]["max_rel_diff"].as_f64().unwrap() < 1e-8);
}

#[test]
fn analyze_flags_unphysical_input() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(
        dir.path(),
        "bad.json",
        r#"{"n1": 0, "n2": 0, "m1": [0, 0], "m2": [0, 0], "ms": [0, 0], "mc": [0.5, 0]}"#,
    );
    let o = gaussent(&["analyze", &state]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("uncertainty principle violated"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["physical"]["uncertainty"], false);
}

#[test]
fn analyze_rejects_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "bad.json", r#"{"n1": 0, "n2": "x"}"#);
    let o = gaussent(&["analyze", &state]);
    assert_eq!(code(&o), 1);
}

#[test]
fn phase_diagram_writes_csv_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pd.csv");
    let o = gaussent(&[
        "phase-diagram",
        "--n-grid",
        "0:3:20",
        "--eta1-grid",
        "-0.5:0.5:21",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 20 * 21);
    assert!(text.starts_with("n,eta1,class,ef_bits"));
    assert!(text.contains(",entangled,") && text.contains(",separable,"));
    let script = fs::read_to_string(dir.path().join("pd.plot.py")).unwrap();
    assert!(script.contains("pd.csv"));
}

#[test]
fn phase_diagram_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pd.csv");
    let o = gaussent(&[
        "phase-diagram",
        "--n-grid",
        "3:0",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!csv.exists());
}

#[test]
fn simulate_is_reproducible_and_prints_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let out = dir.path().join(format!("{tag}.json"));
        let tr = dir.path().join(format!("{tag}.jsonl"));
        let o = gaussent(&[
            "simulate",
            "--family",
            "thermal-squeezed",
            "--n",
            "1",
            "--mc",
            "1.2",
            "--shots",
            "20000",
            "--bootstrap",
            "20",
            "-o",
            out.to_str().unwrap(),
            "--transcript",
            tr.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let err = String::from_utf8_lossy(&o.stderr).to_string();
        (fs::read(out).unwrap(), fs::read_to_string(tr).unwrap(), err)
    };
    let (a, ta, err) = run("a");
    let (b, tb, _) = run("b");
    assert_eq!(a, b);
    assert_eq!(ta, tb);
    assert!(err.contains("seed 7449364397365227124"), "{err}");
    assert!(err.contains("verdict: entangled"), "{err}");
    let first: Value = serde_json::from_str(ta.lines().next().unwrap()).unwrap();
    assert_eq!(first["msg"]["kind"], "MEAS_REQUEST");
    assert!(first.get("wall_ms").is_none());
}

#[test]
fn simulate_rejects_unphysical_family_parameters() {
    let o = gaussent(&[
        "simulate",
        "--family",
        "thermal-squeezed",
        "--n",
        "0.1",
        "--mc",
        "2",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_runs_a_circuit_file() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"thermal": [0.3, 0.3], "gates": [{"gate": "two_mode_squeeze", "r": 0.2}]}"#,
    );
    let o = gaussent(&[
        "simulate",
        "--family",
        "circuit",
        "--circuit",
        &c,
        "--shots",
        "20000",
        "--bootstrap",
        "10",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], "circuit");
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"thermal": [0, 0], "gates": [{"gate": "warp"}]}"#,
    );
    assert_eq!(
        code(&gaussent(&[
            "simulate",
            "--family",
            "circuit",
            "--circuit",
            &bad
        ])),
        1
    );
}

#[test]
fn oracle_cutoff_floor_and_report() {
    assert_eq!(
        code(&gaussent(&[
            "oracle",
            "--suite",
            "identities",
            "--cutoff",
            "4"
        ])),
        1
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.json");
    let o = gaussent(&[
        "oracle",
        "--suite",
        "identities",
        "--cutoff",
        "30",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(!v["entries"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_reports_truncation_failures() {
    let o = gaussent(&["oracle", "--suite", "identities", "--cutoff", "8"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
}
