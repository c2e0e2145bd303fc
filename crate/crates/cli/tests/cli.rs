use std::process::{Command, Output};

use serde_json::Value;

fn sudler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sudler")).args(args).env_remove("SUDLER_PRECISION").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn eval_empty_product_is_one() {
    let out = sudler(&["eval", "--alpha", "[0;(1)]", "--N", "0"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["lo"].as_f64(), v["hi"].as_f64()), (Some(1.0), Some(1.0)));
}

#[test]
fn eval_hits_zero_at_a_half() {
    let v = json(&sudler(&["eval", "--alpha", "1/2", "--N", "2"]));
    assert_eq!((v["lo"].as_f64(), v["hi"].as_f64()), (Some(0.0), Some(0.0)));
}

#[test]
fn eval_matches_closed_form_for_small_n() {
    // P_1(1/6) = 2 sin(π/6) = 1; JSON endpoints are f64 rounded outward
    let v = json(&sudler(&["eval", "--alpha", "1/6", "--N", "1"]));
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(lo <= 1.0 && 1.0 <= hi && hi - lo < 1e-15);
}

#[test]
fn perturbed_eval_and_decompose() {
    let v = json(&sudler(&["eval", "--alpha", "[0;(6,5)]", "--level", "4", "--eps", "-0.025"]));
    assert!(v["lo"].as_f64().unwrap() > 0.5 && v["hi"].as_f64().unwrap() < 2.0);

    let d = json(&sudler(&["decompose", "--alpha", "[0;(6,5)]", "--N", "1000"]));
    let p = json(&sudler(&["eval", "--alpha", "[0;(6,5)]", "--N", "1000"]));
    let (lo, hi) = (d["product"]["lo"].as_f64().unwrap(), d["product"]["hi"].as_f64().unwrap());
    let mid = 0.5 * (p["lo"].as_f64().unwrap() + p["hi"].as_f64().unwrap());
    assert!(lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12));
}

#[test]
fn limit_at_zero_exceeds_one_for_six_five() {
    let v = json(&sudler(&["limit", "--alpha", "[0;(6,5)]", "--r", "0", "--eps", "0", "--T", "20000"]));
    let (lo, hi) = (v["lo"].as_f64().unwrap(), v["hi"].as_f64().unwrap());
    assert!(lo > 1.0 && hi < 1.06, "[{lo}, {hi}]");
}

#[test]
fn parse_errors_exit_nonzero() {
    let out = sudler(&["eval", "--alpha", "[0;(6,5)", "--N", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing ']'"));
    assert_eq!(sudler(&["eval", "--alpha", "1/2"]).status.code(), Some(3));
    assert_eq!(sudler(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(sudler(&["verify-theorem3", "--alpha", "[0;(2,7)]"]).status.code(), Some(3));
}

#[test]
fn empty_figure_range_keeps_the_header() {
    let out = sudler(&["figure6a", "--lo", "0.1", "--hi", "0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a,eps,lo,hi\n");
}

#[test]
fn figure1_grid_matches_the_requested_resolution() {
    let out = sudler(&["figure1", "--T", "100", "--R", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,F");
    assert_eq!(lines.len(), 101);
    for (j, line) in lines[1..].iter().enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - cols[0] - 0.01).abs() < 1e-12, "row {j}");
        assert!((cols[0] - j as f64 / 100.0).abs() < 1e-12);
    }
}

#[test]
fn smoke_scale_is_not_a_certificate() {
    let out = sudler(&["verify-theorem1", "--case", "7", "--scale", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["certifying"], false);
    assert_eq!(v["params"]["scale"], 100);
}

#[test]
fn nine_to_eighteen_certifies() {
    let out = sudler(&["verify-theorem1", "--case", "9-18"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["certifying"], true);
}

#[test]
fn period_two_certificate_is_deterministic() {
    let args = ["verify-theorem3", "--alpha", "[0;(5,4)]", "--no-timing", "--samples", "20"];
    let a = sudler(&args);
    let b = sudler(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["certifying"], true);
    assert!(v.get("wall_clock_s").is_none());
}

#[test]
fn text_and_csv_reports() {
    let out = sudler(&["verify-theorem1", "--case", ">=18", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,status,margin\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
    let out = sudler(&["verify-theorem1", "--case", ">=18", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("certifying=true"));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("sudler-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.json");
    let out = sudler(&["eval", "--alpha", "[0;(2)]", "--N", "5", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["lo"].as_f64().unwrap() > 0.0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn precision_comes_from_the_environment() {
    let narrow = Command::new(env!("CARGO_BIN_EXE_sudler"))
        .args(["eval", "--alpha", "[0;(1)]", "--N", "50"])
        .env("SUDLER_PRECISION", "40")
        .output()
        .unwrap();
    let wide = sudler(&["eval", "--alpha", "[0;(1)]", "--N", "50"]);
    let w = |o: &Output| json(o)["log10width"].as_f64().unwrap();
    assert!(w(&narrow) > w(&wide) + 3.0);
}
