use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kamforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kamforge")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).to_str().unwrap().to_owned()
}

fn run_json(name: &str) -> (Value, i32) {
    let out = kamforge(&["run", &scenario(name)]);
    (serde_json::from_slice(&out.stdout).expect("report is JSON"), out.status.code().unwrap())
}

#[test]
fn kolmogorov_report_has_casimir_coefficients() {
    let (r, code) = run_json("kolmogorov_1d.json");
    assert_eq!(code, 0);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["casimir_coefficients"], serde_json::json!(["0", "-3", "-1/2"]));
    assert_eq!(r["result"]["generators"][0]["shift"], serde_json::json!(["-1"]));
    assert_eq!(r["scenario"]["kind"], "kolmogorov-nf");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn resonances_report_lists_two_one() {
    let (r, code) = run_json("resonances.json");
    assert_eq!(code, 0);
    assert_eq!(r["result"]["resonances"], serde_json::json!([[2, 1]]));
}

#[test]
fn resonant_denominator_is_a_report_not_a_crash() {
    let (r, code) = run_json("resonant.json");
    assert_eq!(code, 1);
    assert_eq!(r["status"], "error");
    assert_eq!(r["error"]["kind"], "ResonantDenominator");
    assert_eq!(r["error"]["details"]["lattice"], serde_json::json!([2, 1]));
}

#[test]
fn malformed_scenario_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind": "diophantine", "omega": ["1"]}"#).unwrap();
    let out = kamforge(&["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema error"));
    assert!(out.stdout.is_empty());
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = kamforge(&["run", &scenario("liouville.json"), "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = kamforge(&["run", &scenario("liouville.json")]).stdout;
    assert_eq!(std::fs::read(&target).unwrap(), stdout);
}

#[test]
fn every_shipped_scenario_runs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut names: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    for name in names.iter().filter(|n| n.as_str() != "measure.json") {
        let (r, code) = run_json(name);
        let expected = if name == "resonant.json" { 1 } else { 0 };
        assert_eq!(code, expected, "{name}: {r}");
    }
}

#[test]
fn selftest_is_byte_stable_and_mutation_is_caught() {
    let a = kamforge(&["selftest", "--seed", "7"]);
    let b = kamforge(&["selftest", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let m = kamforge(&["selftest", "--seed", "7", "--mutate-bracket-sign"]);
    assert_eq!(m.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&m.stdout).unwrap();
    let props = r["result"]["properties"].as_array().unwrap();
    let get = |n: &str| props.iter().find(|p| p["name"] == n).unwrap();
    assert_eq!(get("jacobi")["passed"], true);
    assert_eq!(get("eigen-relation")["passed"], false);
    assert!(get("eigen-relation")["detail"].as_str().unwrap().contains("sign"));
}

#[test]
fn version_flag() {
    let out = kamforge(&["--version"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), format!("kamforge {}", env!("CARGO_PKG_VERSION")));
}
