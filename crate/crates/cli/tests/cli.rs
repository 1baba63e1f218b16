use std::process::{Command, Output};

use serde_json::Value;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stgo-kit")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn eval_ylm_constant() {
    let o = kit(&["eval", "ylm", "--l", "0", "--m", "0", "--theta", "1", "--phi", "1"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!((v["re"].as_f64().unwrap() - 0.28209479177387814).abs() < 1e-16);
    assert_eq!(v["im"].as_f64(), Some(0.0));
}

#[test]
fn eval_bfun_is_yukawa() {
    let o = kit(&["eval", "bfun", "--n", "0", "--l", "0", "--m", "0", "--alpha", "1", "--r", "0,0,1"]);
    let v = stdout_json(&o);
    let want = (-1.0f64).exp() / (4.0 * std::f64::consts::PI).sqrt();
    assert!((v["re"].as_f64().unwrap() - want).abs() < 1e-15);
}

#[test]
fn domain_error_exits_one_with_json() {
    let o = kit(&["eval", "zlm", "--l", "1", "--m", "0", "--r", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"]["kind"], "singularity");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kit(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(kit(&["eval", "ylm", "--l", "x"]).status.code(), Some(2));
    assert_eq!(kit(&["apply", "--op", "1", "--target", "gaussian:1", "--at", "0,0,1"]).status.code(), Some(2));
}

#[test]
fn verify_failure_exits_one() {
    let o = kit(&["verify", "pade", "--tol", "1e-17"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert!(v["summary"]["passed"].as_u64() < v["summary"]["total"].as_u64());
}

#[test]
fn gaunt_csv() {
    let o = kit(&["gaunt", "--l1", "2", "--m1", "1", "--l2", "1", "--m2", "-1"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "l1,m1,l2,m2,l,value");
    assert_eq!(lines.len(), 3);
    let single = kit(&["gaunt", "--l1", "2", "--m1", "1", "--l2", "1", "--m2", "-1", "--l", "3"]);
    let single = String::from_utf8(single.stdout).unwrap();
    let a: f64 = lines[2].rsplit(',').next().unwrap().parse().unwrap();
    let b: f64 = single.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((a - b).abs() < 1e-15);
}

#[test]
fn addition_even_power_terminates() {
    let o = kit(&["addition", "--nu", "4", "--l", "0", "--m", "0", "--r", "0.2,0.1,0", "--rp", "0,0,1"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["exact"], true);
    assert_eq!(v["outer_l_used"], 2);
    let (got, want) = (v["value"]["re"].as_f64().unwrap(), v["direct"]["re"].as_f64().unwrap());
    assert!((got - want).abs() < 1e-13 * want.abs());
}

#[test]
fn addition_csv_rate_and_boundary() {
    let o = kit(&["addition", "--nu", "-1", "--l", "0", "--m", "0", "--r", "0,0,0.5", "--rp", "0,0,1", "--csv", "-"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("shell_l1,partial_value_re,partial_value_im,shell_contrib,est_error"));
    let errs: Vec<f64> = lines.map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    for w in errs[2..].windows(2) {
        assert!((w[1] / w[0] - 0.5).abs() < 1e-9);
    }
    let slow = kit(&["addition", "--nu", "-1", "--l", "1", "--m", "0", "--r", "0,0,0.95", "--rp", "0,0,1", "--lmax-outer", "20"]);
    assert_eq!(slow.status.code(), Some(1));
    assert_eq!(stdout_json(&slow)["converged"], false);
    let edge = kit(&["addition", "--nu", "-1", "--l", "0", "--m", "0", "--r", "0,0,1", "--rp", "1,0,0"]);
    assert_eq!(edge.status.code(), Some(1));
    assert_eq!(stdout_json(&edge)["error"]["kind"], "boundary");
}

#[test]
fn apply_scalar_matches_tensor_form() {
    let scalar = stdout_json(&kit(&["apply", "--op", "2,1", "--target", "gaussian:0.8", "--at", "0.3,-0.2,0.5"]));
    let tensor = stdout_json(&kit(&[
        "apply", "--op", "2,1", "--target", "gaussian:0.8", "--target-lm", "0,0", "--at", "0.3,-0.2,0.5",
    ]));
    // The tensor target carries the constant harmonic 1/sqrt(4 pi).
    let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for part in ["re", "im"] {
        let a = scalar["total"][part].as_f64().unwrap() * y00;
        let b = tensor["total"][part].as_f64().unwrap();
        assert!((a - b).abs() < 1e-13, "{part}: {a} vs {b}");
    }
}

#[test]
fn bfun_convolve_lists_terms() {
    let v = stdout_json(&kit(&["bfun", "convolve", "--a", "0,0,0", "--b", "1,1,0", "--alpha", "1", "--r", "0,0,1"]));
    let t = &v["terms"][0];
    for k in ["coeff", "n", "l", "m", "alpha"] {
        assert!(!t[k].is_null(), "missing {k}");
    }
    assert!(v["value"]["re"].is_f64());
}

#[test]
fn bench_csv_is_reproducible() {
    let run = || String::from_utf8(kit(&["bench", "gaunt", "--lmax", "8", "--seed", "5"]).stdout).unwrap();
    let checksums = |s: String| s.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_string()).collect::<Vec<_>>();
    let (a, b) = (run(), run());
    assert!(a.starts_with("name,n_items,total_ns,ns_per_item,checksum"));
    assert_eq!(checksums(a), checksums(b));
}

#[test]
fn verify_pade_matches_golden() {
    let mut v = stdout_json(&kit(&["verify", "pade"]));
    v["runtime_ms"] = Value::from(0);
    let golden: Value = serde_json::from_str(include_str!("golden/verify_pade.json")).unwrap();
    assert_eq!(v, golden);
}

#[test]
fn verify_json_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("stgo-kit-gaunt-{}.json", std::process::id()));
    let o = Command::new(env!("CARGO_BIN_EXE_stgo-kit"))
        .args(["verify", "gaunt", "--lmax", "6", "--json"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("PASS gaunt"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    let cases = v["cases"].as_array().unwrap();
    assert!(cases.iter().any(|c| c["id"].as_str().unwrap().starts_with("quadrature")));
    assert!(cases.iter().all(|c| c["pass"] == true));
}
