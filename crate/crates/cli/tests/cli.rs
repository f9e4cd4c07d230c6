use std::process::{Command, Output};

use serde_json::Value;

fn jtheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtheta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = jtheta(&all);
    (
        code(&out),
        serde_json::from_slice(&out.stdout).expect("valid JSON"),
    )
}

#[test]
fn eval_at_a_zero() {
    let (c, v) = json(&["eval", "--z", "0+0i", "--tau", "0+1i"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    assert_eq!(
        r["value_re"].as_f64().unwrap().abs() + r["value_im"].as_f64().unwrap().abs(),
        0.0
    );
}

#[test]
fn eval_json_fields_and_schema() {
    let (c, v) = json(&["eval", "--z", "0.3+0i", "--tau", "0+1i"]);
    assert_eq!(c, 0);
    for key in [
        "command",
        "params",
        "results",
        "max_residual",
        "pass",
        "seed",
        "version",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let r = &v["results"][0];
    for key in ["value_re", "value_im", "terms", "err_bound"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    // θ₁(0.3, i) from the product formula, to double precision.
    let expected = 0.737_197_163_718_681_6;
    assert!((r["value_re"].as_f64().unwrap() - expected).abs() < 1e-14);
}

#[test]
fn eval_near_real_axis_takes_the_reduced_path() {
    let out = jtheta(&["eval", "--z", "0.2+0i", "--tau", "0.3+0.002i"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("method=reduced"));
    assert!(text.contains("reduced by"));
}

#[test]
fn verify_transform_sweep_passes() {
    let (c, v) = json(&["verify-transform", "--count", "200", "--tol", "1e-9"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 200);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn fixed_seed_is_byte_identical() {
    let a = jtheta(&["verify-transform", "--count", "1", "--seed", "7"]);
    let b = jtheta(&["verify-transform", "--count", "1", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = jtheta(&["verify-transform", "--count", "1", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn unreachable_tolerance_is_a_verification_failure() {
    let out = jtheta(&["verify-transform", "--count", "10", "--tol", "1e-16"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds tolerance"));
}

#[test]
fn csv_schema() {
    let out = jtheta(&["verify-transform", "--count", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a,b,c,d,z_re,z_im,tau_re,tau_im,residual"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn json_numbers_round_trip() {
    let (_, v) = json(&["verify-transform", "--count", "3"]);
    let text = serde_json::to_string(&v).unwrap();
    let again: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v, again);
    let out = jtheta(&["verify-transform", "--count", "3", "--format", "csv"]);
    let csv_text = stdout(&out);
    let first = csv_text.lines().nth(1).unwrap();
    let z_re: f64 = first.split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(z_re, v["results"][0]["z_re"].as_f64().unwrap());
}

#[test]
fn residue_closure_example() {
    let (c, v) = json(&[
        "verify-residues",
        "--m",
        "3",
        "--k",
        "2",
        "--h",
        "1",
        "--v",
        "1.5",
        "--z",
        "0.2+0.1i",
    ]);
    assert_eq!(c, 0);
    assert!(v["summary"]["closure_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["summary"]["identity_residual"].as_f64().unwrap() < 1e-8);
    for row in v["results"].as_array().unwrap() {
        assert!(row["discrepancy"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn contour_gap_is_reported() {
    let (_, v) = json(&[
        "verify-residues",
        "--m",
        "40",
        "--k",
        "1",
        "--h",
        "0",
        "--v",
        "2",
        "--z",
        "0.2+0.1i",
    ]);
    assert!(v["summary"]["contour_gap"].as_f64().unwrap().is_finite());
}

#[test]
fn residue_preconditions_are_usage_errors() {
    let out = jtheta(&[
        "verify-residues",
        "--k",
        "2",
        "--h",
        "2",
        "--v",
        "1.5",
        "--z",
        "0.2+0.1i",
    ]);
    assert_eq!(code(&out), 2);
    let out = jtheta(&[
        "verify-residues",
        "--k",
        "2",
        "--h",
        "1",
        "--v",
        "0.05",
        "--z",
        "0.2+0.1i",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dedekind_is_exact() {
    let out = jtheta(&["dedekind", "--h", "1", "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("s=1/18"));
    assert_eq!(code(&jtheta(&["dedekind", "--h", "2", "--k", "4"])), 3);
}

#[test]
fn multiplier_of_s() {
    let (c, v) = json(&["multiplier", "--matrix", "0,-1,1,0"]);
    assert_eq!(c, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows[0]["phase_over_pi"], "0");
    assert_eq!(rows[0]["value_re"].as_f64().unwrap(), 1.0);
    assert_eq!(rows[1]["phase_over_pi"], "-1/2");
    assert_eq!(rows[1]["value_im"].as_f64().unwrap(), -1.0);
    assert_eq!(code(&jtheta(&["multiplier", "--matrix", "1,2,3,4"])), 3);
}

#[test]
fn reduce_lands_in_the_fundamental_domain() {
    let (c, v) = json(&["reduce", "--tau", "5.3+0.8i"]);
    assert_eq!(c, 0);
    let r = &v["results"][0];
    let (x, y) = (r["tau_re"].as_f64().unwrap(), r["tau_im"].as_f64().unwrap());
    assert!(x.abs() <= 0.5 && x * x + y * y >= 1.0 - 1e-12);
    let (a, b, c, d) = ["a", "b", "c", "d"].map(|k| r[k].as_f64().unwrap()).into();
    assert_eq!(a * d - b * c, 1.0);
}

#[test]
fn eta_at_i() {
    let (c, v) = json(&["eta", "--tau", "0+1i"]);
    assert_eq!(c, 0);
    // η(i) = Γ(1/4)/(2π^{3/4}).
    assert!(
        (v["results"][0]["value_re"].as_f64().unwrap() - 0.768_225_422_326_056_7).abs() < 1e-14
    );
}

#[test]
fn sweep_covers_both_laws() {
    let (c, v) = json(&["sweep", "--count", "20"]);
    assert_eq!(c, 0);
    let row = &v["results"][0];
    assert!(row.get("theta_residual").is_some() && row.get("eta_residual").is_some());
}

#[test]
fn usage_and_domain_exit_codes() {
    assert_eq!(
        code(&jtheta(&["eval", "--z", "0.2 +1i", "--tau", "0+1i"])),
        2
    );
    assert_eq!(code(&jtheta(&["eval", "--z", "zz", "--tau", "0+1i"])), 2);
    assert_eq!(
        code(&jtheta(&[
            "eval", "--z", "0.2+0i", "--tau", "0+1i", "--tol", "1e-2"
        ])),
        2
    );
    assert_eq!(
        code(&jtheta(&[
            "eval", "--z", "0.2+0i", "--tau", "0+1i", "--tol", "1e-16"
        ])),
        2
    );
    assert_eq!(
        code(&jtheta(&["eval", "--z", "0.2+0i", "--tau", "0-1i"])),
        3
    );
    assert_eq!(code(&jtheta(&["nonsense"])), 2);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("jtheta-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = jtheta(&[
        "dedekind", "--h", "1", "--k", "3", "--format", "json", "--out", p,
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["results"][0]["s"], "1/18");
}
