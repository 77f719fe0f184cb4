use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrepeater"))
}

const CONFIG: &str = r#"{
  "params": {"g1": 1, "g2": 2, "Delta": 2, "delta": 2, "Gamma": 4, "gamma": 2},
  "gt": 2,
  "g_tau_range": [0, 15, 150],
  "cases": [{"case": 1, "outcomes": ["eg"]}, {"case": 6}],
  "quantities": ["negativity", "success_probability"],
  "output": "OUT"
}"#;

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let cfg = dir.path().join(format!("{run}.json"));
        fs::write(&cfg, CONFIG.replace("OUT", out.to_str().unwrap())).unwrap();
        let status = bin().arg("sweep").arg(&cfg).output().unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        outputs.push(files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(outputs[0].len(), 6);
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0][0].clone()).unwrap();
    let header = text.lines().position(|l| l == "g_tau,value").unwrap();
    assert!(text.lines().take(header).all(|l| l.starts_with("# ")));
    assert_eq!(text.lines().count() - header - 1, 150);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, CONFIG.replace("\"gt\"", "\"gT\"")).unwrap();
    assert_eq!(bin().arg("sweep").arg(&cfg).status().unwrap().code(), Some(2));
    fs::write(&cfg, CONFIG.replace(r#"[{"case": 1, "outcomes": ["eg"]}, {"case": 6}]"#, "[]")).unwrap();
    assert_eq!(bin().arg("sweep").arg(&cfg).status().unwrap().code(), Some(2));
    assert_eq!(bin().arg("sweep").arg(dir.path().join("missing.json")).status().unwrap().code(), Some(2));
    assert_eq!(bin().args(["figure", "7x", "--out"]).arg(dir.path()).status().unwrap().code(), Some(2));
}

#[test]
fn figure_writes_one_file_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["figure", "4b", "--points", "60", "--out"]).arg(dir.path()).status().unwrap();
    assert!(status.success());
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "fig4b_solid_case5_ef_negativity.csv",
            "fig4b_solid_case6_ef_negativity.csv",
            "fig4b_solid_case8_ef_negativity.csv"
        ]
    );
}

#[test]
fn validate_fast_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("nested/report.json");
    let status = bin().args(["validate", "--out"]).arg(&report).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["level"], "fast");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["tolerance"].is_number()));
}

#[cfg(debug_assertions)]
#[test]
fn tampered_rate_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let status = bin().args(["validate", "--tamper-lambda2", "--out"]).arg(&report).status().unwrap();
    assert_eq!(status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn dump_state_round_trips() {
    let out = bin().args(["dump-state", "--case", "5", "--outcome", "fe", "--g-tau", "3"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dump: qrepeater::qutrit::StateDump = serde_json::from_value(v["state"].clone()).unwrap();
    let state = qrepeater::QutritRegister::from_dump(&dump).unwrap();
    assert_eq!(state.num_atoms(), 2);
    assert!((state.norm() - 1.0).abs() < 1e-12);
    assert_eq!(v["state"]["convention"], "gef-msd");

    let out = bin().args(["dump-state", "--stage", "one", "--gt", "0"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["state"]["num_atoms"], 4);
}
