use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-ech")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn weights_of_omega0() {
    let o = run(&["weights", "omega0:8192", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let w = v["weights"].as_array().unwrap();
    assert_eq!(w.len(), 3);
    assert!((w[0].as_f64().unwrap() - 4.0).abs() < 1e-5);
    assert!(v["area_covered"].as_f64().unwrap() < v["region_area"].as_f64().unwrap());
}

#[test]
fn capacities_csv() {
    let o = run(&["capacities", r#"{"ellipsoid":[4,5.196152422706632]}"#, "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "k,c_k\n0,0\n1,4\n2,5.19615242271\n3,8\n");
}

#[test]
fn capacities_json_format() {
    let o = run(&["--format", "json", "capacities", r#"{"ball":1}"#, "--kmax", "5"]);
    let v = json(&o);
    let c: Vec<f64> = v["capacities"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(c, [0.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
}

#[test]
fn bidisk_verdicts() {
    let o = run(&["check-embedding", "--source", "bidisk", "--target", r#"{"ball":5.2}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["embeds"], "yes");

    let o = run(&["check-embedding", "--source", "bidisk", "--target", r#"{"ball":5}"#]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["embeds"], "no");
    assert_eq!(v["witness_k"], 2);

    let o = run(&["check-embedding", "--source", r#"{"ellipsoid":[4,4]}"#, "--target", "bidisk"]);
    assert_eq!(json(&o)["embeds"], "yes");
}

#[test]
fn obstruction_between_ellipsoids() {
    let o = run(&[
        "check-embedding",
        "--source",
        r#"{"ellipsoid":[4,5]}"#,
        "--target",
        r#"{"ball":4.5}"#,
        "--kmax",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["embeds"], "no");
    assert_eq!(v["criterion"], "capacity obstruction");
}

#[test]
fn packing_exit_codes() {
    let o = run(&["verify-packing"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["ok"], true);

    let dir = std::env::temp_dir().join(format!("toric-ech-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"target":[1,1,0],"pieces":[{"a":0.3,"b":0.3,"x0":0.1,"y0":0.1},{"a":0.3,"b":0.3,"x0":0.1,"y0":0.1}],"required":[[0.3,0.3],[0.3,0.3]]}"#,
    )
    .unwrap();
    let o = run(&["verify-packing", "--placement", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["failures"][0]["kind"], "overlap");
    assert_eq!(v["failures"][0]["pieces"], serde_json::json!([0, 1]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn billiard_csv_and_oracle() {
    let o = run(&["billiard", "--epsilon", "0.2", "--samples", "5", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v,G,alpha,rho1,rho2"));
    assert_eq!(lines.count(), 5);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.matches(" ok").count(), 4);
}

#[test]
fn billiard_svg_overlay() {
    let o = run(&["billiard", "--epsilon", "0.4,0.1", "--samples", "17", "--emit", "svg"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("<path").count(), 3);
}

#[test]
fn scenario_runner() {
    let o = run(&["scenario", "prop-1.4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["scenario"], "ellipsoid-dominance");
    assert_eq!(v["pass"], true);
    assert_eq!(run(&["scenario", "unknown-name"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["capacities", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "svg", "capacities", r#"{"ball":1}"#]).status.code(), Some(2));
    assert_eq!(run(&["weights", "omega0:1"]).status.code(), Some(2));
}

#[test]
fn output_flag_and_determinism() {
    let dir = std::env::temp_dir().join(format!("toric-ech-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.csv");
    let o = run(&["--output", path.to_str().unwrap(), "--format", "csv", "curve", "--samples", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("alpha,x,y\n0,0,6.28318530718\n"));
    let again = run(&["--format", "csv", "curve", "--samples", "8"]);
    assert_eq!(stdout(&again), text);
    std::fs::remove_dir_all(&dir).unwrap();
}
