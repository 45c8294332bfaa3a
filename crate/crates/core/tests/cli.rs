use std::process::{Command, Output};

use serde_json::Value;

fn fblnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fblnorm"))
        .args(args)
        .env_remove("FBLNORM_THREADS")
        .env_remove("FBLNORM_ENUM_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn spec_file(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&fblnorm(&["eval", "abs(d(e1))", "--at", "[-3,0]"])), "3\n");
    assert_eq!(stdout(&fblnorm(&["eval", "d(e1) \\/ d(e2)", "--at", "[1,4]"])), "4\n");
    let bad = fblnorm(&["eval", "abs(d(e1)", "--at", "[1]"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("syntax error"));
    assert_eq!(fblnorm(&["eval", "d(e1)", "--at", "[1,x]"]).status.code(), Some(2));
}

#[test]
fn bound_examples() {
    let v = json(&fblnorm(&["bound", "--lambda", "1,1,1,1", "--p", "4"]));
    let lower = v["lower"].as_f64().unwrap();
    assert!((lower - 2.828427).abs() < 1e-6);
    assert!((v["upper"].as_f64().unwrap() - 1.7822139 * 2.828427).abs() < 1e-5);
    assert_eq!(v["certified"], true);

    let v = json(&fblnorm(&["bound", "--lambda", "1,2,3", "--p", "1"]));
    assert_eq!(v["lower"].as_f64(), Some(6.0));
    assert_eq!(v["upper"].as_f64(), Some(6.0));

    let v = json(&fblnorm(&["bound", "--expr", "abs(d(e1))", "--p", "2", "--family-size", "1"]));
    assert!((v["lower"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["certified"], true);
    assert_eq!(v["family_size"], 1);
}

#[test]
fn bound_sweep_and_inf() {
    let v = json(&fblnorm(&[
        "bound", "--expr", "abs(d(e1)) + abs(d(e2))", "--p", "inf", "--sweep", "3", "--restarts", "2",
    ]));
    let lowers: Vec<f64> = v.as_array().unwrap().iter().map(|e| e["lower"].as_f64().unwrap()).collect();
    assert_eq!(lowers.len(), 3);
    assert!(lowers.windows(2).all(|w| w[1] >= w[0]));
    // two functionals already meet the triangle bound 2 in l_inf^2:
    // x*_1 = (1/2, 1/2), x*_2 = (1/2, -1/2) has constraint 1 and objective 2
    assert!(lowers[0] >= 1.0 - 1e-12);
    assert!((lowers[1] - 2.0).abs() < 1e-9, "{lowers:?}");
}

#[test]
fn capacity_and_domain_exit_3() {
    let o = fblnorm(&["bound", "--expr", "abs(d(e1))", "--p", "3", "--family-size", "30"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity"));
    assert_eq!(fblnorm(&["walsh", "30"]).status.code(), Some(3));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(fblnorm(&["bound", "--lambda", "1,1", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(fblnorm(&["bound", "--lambda", "1,1", "--p", "3", "--step-decay", "2"]).status.code(), Some(2));
    assert_eq!(fblnorm(&["bound", "--p", "3"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_fblnorm"))
        .args(["bound", "--lambda", "1", "--p", "3"])
        .env("FBLNORM_ENUM_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn walsh_csv() {
    assert_eq!(stdout(&fblnorm(&["walsh", "1"])), "1,1\n1,-1\n");
    assert_eq!(stdout(&fblnorm(&["walsh", "3"])).lines().count(), 8);
}

const ONES_GRID: &str = r#"
name = "ones"
p = [2.5, 3, 4, 10, "inf"]
[lambda]
ones = [2, 4, 8, 16]
"#;

#[test]
fn scan_equal_coefficients() {
    let spec = spec_file(ONES_GRID);
    let o = fblnorm(&["scan", spec.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("experiment,p,n,m,lambda,r,lower,upper,certified,method,ms"));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    for row in &rows {
        let m: f64 = row[3].parse().unwrap();
        let r: f64 = row[5].parse().unwrap();
        let lower: f64 = row[6].parse().unwrap();
        assert!((lower - m.powf(1.0 / r)).abs() <= 1e-12 * lower, "{row:?}");
        assert_eq!(&row[8], "true");
        assert_eq!(&row[10], "");
    }
    // byte-identical reruns, with or without a worker pool
    let again = fblnorm(&["--threads", "1", "scan", spec.path().to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn scan_l1_regime_and_timestamp() {
    let spec = spec_file(
        r#"
name = "l1"
p = [1, 1.5, 2]
[lambda]
ones = [1, 2, 3, 4]
"#,
    );
    let o = fblnorm(&["scan", "--timestamp", "--timing", spec.path().to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.starts_with("# generated unix="));
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    for row in reader.records().map(Result::unwrap) {
        let m: f64 = row[3].parse().unwrap();
        assert!((row[6].parse::<f64>().unwrap() - m).abs() < 1e-9);
        assert_eq!(row[7].parse::<f64>().unwrap(), m);
        assert!(row[10].parse::<u64>().is_ok());
    }
}

#[test]
fn scan_rejects_bad_specs() {
    let empty = spec_file("name = \"x\"\np = []\n[lambda]\nones = [2]\n");
    let o = fblnorm(&["scan", empty.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p:"));
    let unseeded = spec_file("name = \"x\"\np = [3]\n[lambda]\nrandom = { count = 2, length = 2 }\n");
    assert_eq!(fblnorm(&["scan", unseeded.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(fblnorm(&["scan", "/nonexistent/spec.toml"]).status.code(), Some(2));
}

#[test]
fn verify_single_suite() {
    let v = json(&fblnorm(&["verify-paper", "--suite", "walsh-feasibility"]));
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], "walsh-feasibility");
    assert_eq!(suites[0]["passed"], true);
    assert!(v.get("timestamp").is_none());

    let stamped = json(&fblnorm(&["verify-paper", "--suite", "structural", "--timestamp"]));
    assert!(stamped["timestamp"].as_u64().is_some());

    assert_eq!(fblnorm(&["verify-paper", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_fails_with_exit_1_on_a_tightened_tolerance() {
    // an impossible feasibility slack makes the Walsh suite fail
    let o = fblnorm(&["verify-paper", "--suite", "walsh-feasibility", "--tol-feasibility=-0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failure = &v["suites"][0]["failures"][0];
    assert!(failure["cell"]["lambda"].is_array());
}
