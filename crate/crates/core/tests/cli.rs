use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_phasequant"));
    c.env_remove("PHASEQUANT_OUT").env_remove("PHASEQUANT_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reproduce_single_claim_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let o = run(&["reproduce", "--out", out.to_str().unwrap(), "--only", "k1_bound"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "phasequant/1");
    let claims = report["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 1);
    assert_eq!(claims[0]["name"], "k1_bound");
    let k1 = claims[0]["checks"][0]["value"].as_f64().unwrap();
    assert!((k1 - 0.162).abs() < 5e-4);
    let csv = fs::read_to_string(out.join("01_k1_bound.csv")).unwrap();
    assert!(csv.starts_with("k,rho,alpha,quantity,value,method\n"));
}

#[test]
fn only_accepts_lists_and_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce", "--out", dir.path().to_str().unwrap(), "--only", "1,ground_state", "--only", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["01_k1_bound.csv", "04_g_cross.csv", "13_ground_state.csv", "report.json"]);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let o = bin().args(["reproduce", "--only", "asymptotics"]).env("PHASEQUANT_OUT", &target).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("03_asymptotics.csv").exists());
}

#[test]
fn failing_claim_exits_one_with_failure_list() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce", "--out", dir.path().to_str().unwrap(), "--only", "correspondence"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL 10 correspondence"));
    assert!(text.contains("commutator slope"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&["reproduce", "--out", blocker.join("sub").to_str().unwrap(), "--only", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!o.stderr.is_empty());
}

#[test]
fn partial_writes_are_removed() {
    let dir = tempfile::tempdir().unwrap();
    // A directory squatting on a claim CSV name makes that write fail after report.json is written.
    fs::create_dir(dir.path().join("13_ground_state.csv")).unwrap();
    let o = run(&["reproduce", "--out", dir.path().to_str().unwrap(), "--only", "1,13"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!dir.path().join("report.json").exists());
    assert!(!dir.path().join("01_k1_bound.csv").exists());
}

#[test]
fn argument_and_config_errors_exit_two() {
    assert_eq!(run(&["spectrum", "--k", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--k", "1", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(&["coherent", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["reproduce", "--only", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["dump-operator", "--kind", "k9", "--k", "1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "unknown_key = 3\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "reproduce", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_errors_exit_three() {
    // Order 2e6 at argument 2e6 is outside both Bessel expansions.
    let o = run(&["coherent", "--k", "1e6", "--rho", "1e6"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("converge"));
    assert_eq!(run(&["scan-k", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "spectrum_dim = 300\nirrep_dim = 50\n").unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "reproduce",
        "--out",
        out.to_str().unwrap(),
        "--only",
        "ground_state",
        "--irrep-dim",
        "60",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["spectrum_dim"], 300);
    assert_eq!(report["config"]["irrep_dim"], 60);
}

fn csv_bodies(dir: &Path) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn reproduce_csvs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let only = "1,3,4,6,7,9,10,12,13";
    run(&["reproduce", "--out", a.path().to_str().unwrap(), "--only", only]);
    run(&["reproduce", "--out", b.path().to_str().unwrap(), "--only", only]);
    let (x, y) = (csv_bodies(a.path()), csv_bodies(b.path()));
    assert_eq!(x.len(), 9);
    assert_eq!(x, y);
}

#[test]
fn subcommand_outputs_are_deterministic() {
    for args in [
        &["spectrum", "--k", "1", "--dim", "200"][..],
        &["coherent", "--k", "1", "--rho", "3", "--alpha", "0.5"],
        &["two-mode", "--m", "6"],
        &["dump-operator", "--kind", "sinphi", "--k", "0.5", "--dim", "6", "--format", "csv"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn spectrum_csv_support() {
    let o = run(&["spectrum", "--k", "1", "--dim", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let vals: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals.len(), 2000);
    assert!(vals.iter().all(|v| v.abs() <= 1.0 + 1e-3));
}

#[test]
fn coherent_ground_state() {
    let o = run(&["coherent", "--k", "0.5", "--rho", "0", "--alpha", "0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "phasequant/1");
    assert_eq!(v["trig"]["mean_cos"].as_f64(), Some(0.0));
    assert_eq!(v["k3"]["mean"].as_f64(), Some(0.5));
}

#[test]
fn scan_k_brackets_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let o = run(&["scan-k", "--lo", "0.2", "--hi", "0.5", "--tol", "1e-3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let lo = v["threshold_bracket"][0].as_f64().unwrap();
    let hi = v["threshold_bracket"][1].as_f64().unwrap();
    assert!(0.30 <= lo && hi <= 0.34 && hi - lo <= 1e-3);
}

#[test]
fn dump_operator_json() {
    let o = run(&["dump-operator", "--kind", "kplus", "--k", "1", "--dim", "4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "kplus");
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    // <k,1|K+|k,0> = sqrt(2k)
    assert_eq!(entries[0]["row"], 1);
    assert!((entries[0]["re"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
}
