use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nextremal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn family_info_prints_friedrichs_parameter() {
    let o = run(&["family", "info", "--family", "stieltjes-wigert", "--q", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // 1 - (0.5; 0.5)_∞
    assert!(out.contains("F: 7.11211904913397578"), "{out}");
    assert!(out.contains("alpha: -1.40605070456711125"), "{out}");
}

#[test]
fn measure_round_trips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu1.json");
    let p = path.to_str().unwrap();
    let o = run(&["measure", "build", "--family", "sw", "--solution", "t=1", "--count", "40", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["classify", "--in", p]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "indeterminate");
    assert_eq!(v["stieltjes_class"], "indet(S)");
}

#[test]
fn measure_csv_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let o = run(&[
        "measure", "build", "--family", "quartic", "--solution", "friedrichs", "--count", "5", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("atom,mass"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn verify_writes_report_and_exits_zero_on_pass() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&[
        "verify", "--theorem", "E1.10", "--family", "sw", "--t", "1", "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["theorem_id"], "E1.10");
    assert_eq!(r["overall"], "pass");
    assert_eq!(r["config"]["bits"], 256);
    assert!(r.get("runtime_ms").is_none());
}

#[test]
fn verify_csv_and_timing() {
    let o = run(&["verify", "--theorem", "E1.10", "--family", "sw", "--format", "csv", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("theorem_id,family,description,expected,observed,tolerance,outcome"));
    assert!(out.lines().skip(1).all(|l| l.ends_with(",pass")), "{out}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"bits": 192, "tail_tol": 1e-25}"#).unwrap();
    let rep = dir.path().join("r.json");
    let o = run(&[
        "--config", cfg.to_str().unwrap(), "--bits", "320", "verify", "--theorem", "E1.10", "--family", "sw",
        "--report", rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["config"]["bits"], 320);
    assert_eq!(r["config"]["tail_tol"], 1e-25);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["verify", "--theorem", "T9.9", "--family", "sw"]).status.code(), Some(1));
    assert_eq!(run(&["family", "info", "--family", "hermite"]).status.code(), Some(1));
    assert_eq!(run(&["family", "info", "--family", "asc", "--a", "3"]).status.code(), Some(1));
    assert_eq!(run(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["measure", "build", "--family", "sw", "--solution", "zz", "--out", "x.json"]).status.code(), Some(1));
}

#[test]
fn nevanlinna_eval_reports_identity_residual() {
    let o = run(&["nevanlinna", "eval", "--family", "sw", "--z", "-1.5,0.75", "--t", "inf"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("AD - BC - 1:")).unwrap();
    let r: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!(r < 1e-12, "{out}");
    assert!(out.contains("stieltjes transform of mu_t"));
}
