use std::path::Path;
use std::process::{Command, Output};

fn fbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbl"))
        .env_remove("FBL_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn conjecture_counterexample_json() {
    let out = stdout(&fbl(&["conjecture", "--dist", "twopoint:1:0.2:20:0.8", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["below_half"], true);
    assert!((v["value"].as_f64().unwrap() - 0.25534).abs() < 1e-5);
    let out = stdout(&fbl(&["conjecture", "--dist", "poisson:2"]));
    assert!(out.ends_with(",false\n"));
}

#[test]
fn her_significance_curve() {
    let csv = stdout(&fbl(&[
        "sweep", "--model", "her", "--param", "lambda", "--grid", "1e-8:1e3:log", "--op",
        "significance",
    ]));
    assert!(csv.starts_with("lambda,value,error\n"));
    let v = column(&csv, 1);
    assert_eq!(v.len(), 100);
    assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(v[0] >= 0.999 && v[99] <= 0.55);
}

#[test]
fn zeta_bounds_table() {
    let csv = stdout(&fbl(&[
        "sweep", "--model", "cm", "--param", "tau", "--grid", "2.05:10:lin:60", "--op", "bounds",
    ]));
    let (tau, lo, hi) = (column(&csv, 0), column(&csv, 1), column(&csv, 2));
    assert!(lo.iter().zip(&hi).all(|(l, h)| l <= h));
    assert!(lo.iter().all(|&l| l > 0.8));
    let argmin = (0..lo.len()).min_by(|&a, &b| lo[a].total_cmp(&lo[b])).unwrap();
    assert!((2.0..=4.0).contains(&tau[argmin]));
    let csv = stdout(&fbl(&[
        "sweep", "--model", "cm", "--param", "tau", "--grid", "2.1,10", "--op", "bounds",
    ]));
    assert!(column(&csv, 1).iter().all(|&l| l >= 0.9));
}

#[test]
fn analytic_json_shape() {
    let out = stdout(&fbl(&["analytic", "--op", "her-significance", "--lambda", "1", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.850177).abs() < 1e-6);
    assert!(v["truncation_bound"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["params"]["lambda"], 1.0);
    let out = stdout(&fbl(&["analytic", "--op", "pam-mean", "--delta=-0.5", "--format", "json"]));
    assert!(out.contains("\"finite\": false"));
    let out = stdout(&fbl(&["analytic", "--op", "pam-exponents", "--delta=-0.75"]));
    assert_eq!(out.lines().nth(1).unwrap(), "pam-exponents,2.75,,-0.75");
}

#[test]
fn generated_graph_round_trips_through_bias() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    stdout(&fbl(&["generate", "--model", "her", "--lambda", "3", "-n", "500", "-o", p]));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# n=500\n"));
    let out = stdout(&fbl(&["bias", "--input", p, "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 500);
    let cert = &v["certificate"];
    assert_eq!(cert["nonneg"], true);
    let (a, b) = (cert["avg"].as_f64().unwrap(), cert["rewrite_avg"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
}

#[test]
fn config_errors_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    let o = out.to_str().unwrap();
    for args in [
        vec!["sweep", "--model", "her", "--param", "lambda", "--grid", "0:1:log", "--op", "significance"],
        vec!["sweep", "--model", "her", "--param", "tau", "--grid", "1,2", "--op", "significance"],
        vec!["limit-sample", "--model", "pam", "--delta=-1.5"],
        vec!["analytic", "--op", "cm-bounds", "--tau", "1.9"],
        vec!["generate", "--model", "cm", "--degrees", "1,1,1", "-n", "3"],
        vec!["conjecture", "--dist", "nonsense:3"],
    ] {
        let mut full = args.clone();
        full.extend(["-o", o]);
        let r = fbl(&full);
        assert_eq!(r.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        assert!(!r.stderr.is_empty());
        assert!(!Path::new(&out).exists());
    }
    assert_eq!(fbl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_one() {
    let r = fbl(&["analytic", "--op", "gw-significance", "--dist", "zeta:3.5"]);
    assert_eq!(r.status.code(), Some(1), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn seeds_and_threads() {
    let args = ["limit-sample", "--model", "her", "--lambda", "2", "--samples", "50000"];
    let a = stdout(&fbl(&[&args[..], &["--seed", "5", "--threads", "1"]].concat()));
    let b = stdout(&fbl(&[&args[..], &["--seed", "5", "--threads", "4"]].concat()));
    let c = stdout(&fbl(&[&args[..], &["--seed", "6"]].concat()));
    assert_eq!(a, b);
    assert_ne!(a, c);
}
