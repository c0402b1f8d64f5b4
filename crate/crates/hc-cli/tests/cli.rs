use std::process::Command;

use serde_json::Value;

fn hc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hc"))
        .args(args)
        .output()
        .expect("hc runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, stdout, _) = hc(&all);
    (code, serde_json::from_str(&stdout).expect("valid json"))
}

fn strip_timing(v: &mut Value) {
    if let Some(records) = v["records"].as_array_mut() {
        for r in records {
            r.as_object_mut().unwrap().remove("elapsed_ms");
        }
    }
}

#[test]
fn tables_match_reference() {
    let (code, v) = json(&["tables"]);
    assert_eq!(code, 0);
    let rows = v["data"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10]["B"], "5/66");
    assert_eq!(rows[10]["c"], "-1/467775");
    assert_eq!(rows[1]["c"], "-1");
    assert!(rows[0]["c"].is_null());
}

#[test]
fn appendixb_n5_solution() {
    let (code, v) = json(&["appendixb", "--n", "5"]);
    assert_eq!(code, 0);
    let sol: Vec<&str> = v["data"][0]["solution"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(sol, ["3/4", "3/8"]);
    assert_eq!(v["data"][0]["M"].as_array().unwrap().len(), 5);
    assert_eq!(v["data"][0]["certificates"]["split_exact"], true);
}

#[test]
fn appendixb_rejects_large_n() {
    let (code, _, err) = hc(&["appendixb", "--n", "27"]);
    assert_eq!(code, 2);
    assert!(err.contains("27"));
}

#[test]
fn zero_tuples_is_vacuous_pass() {
    let (code, v) = json(&["identities", "--seed", "1", "--tuples", "0"]);
    assert_eq!(code, 0);
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["samples"] == 0));
}

#[test]
fn reports_are_deterministic() {
    let args = ["embedding", "--seed", "9", "--tuples", "4"];
    let (_, mut a) = json(&args);
    let (_, mut b) = json(&args);
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b);
    let names: Vec<&str> = a["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hc"))
            .args(["structures", "--tuples", "5", "--json"])
            .env("HC_THREADS", threads)
            .output()
            .unwrap();
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        strip_timing(&mut v);
        v
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn scenario_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scenario");
    std::fs::write(&path, "seed = 1\nmodel r3\n").unwrap();
    let (code, _, err) = hc(&["identities", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"));
}

#[test]
fn scenario_suite_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.scenario");
    std::fs::write(&path, "suite = tables\n").unwrap();
    assert_eq!(hc(&["pentagon", "--scenario", path.to_str().unwrap()]).0, 2);
    assert_eq!(hc(&["run", "--scenario", path.to_str().unwrap()]).0, 0);
}

#[test]
fn pentagon_scenario_with_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("desk.scenario");
    let out = dir.path().join("report.json");
    std::fs::write(
        &path,
        "suite = pentagon\nseed = 3\nmodel = r3\ngauge = x2 dx0^dx1\nlie_dim = 2\nrho = d/dx0\nrho = d/dx1\nf = 0 : -x1 dx2\nf = 1 : x0 dx2\nsolve_degree = 1\n",
    )
    .unwrap();
    let (code, stdout, _) = hc(&[
        "run",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "pentagon");
    assert_eq!(v["status"], "pass");
    assert!(v["records"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["name"] == "pentagon/R3-volume/m=2"));
}

#[test]
fn invalid_model_fails_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.scenario");
    std::fs::write(
        &path,
        "model = bad\ndimension = 3\nn = 2\nomega = x0 dx0^dx1^dx2\nbasepoint = 0 0 0\n",
    )
    .unwrap();
    let (code, v) = json(&[
        "structures",
        "--scenario",
        path.to_str().unwrap(),
        "--tuples",
        "2",
    ]);
    assert_eq!(code, 1);
    let model = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "model/bad")
        .unwrap();
    assert_eq!(model["status"], "fail");
    assert!(model["counterexample"].is_object());
}
