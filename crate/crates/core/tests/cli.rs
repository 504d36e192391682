//! The binary: exit codes, outputs, reproducibility.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spheretail"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn verify_lemmas_quick_passes() {
    let (code, out) = run(&["verify-lemmas", "--grid-preset", "quick"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in v["reports"].as_array().unwrap() {
        for key in ["claim", "grid", "worst_margin", "worst_point", "tolerance", "pass"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(run(&["verify-lemmas", "--grid-preset", "quick", "--tol", "-1"]).0, 2);
    assert_eq!(run(&["tail", "--d", "2", "--coeffs", "1,0", "--t", "1"]).0, 2);
    assert_eq!(run(&["tail", "--d", "1", "--coeffs", "1", "--t", "1"]).0, 2);
    assert_eq!(run(&["tail", "--d", "3", "--coeffs", "1", "--radial", "const:2"]).0, 2);
    assert_eq!(run(&["compare", "--format", "xml"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["counterexample", "--threads", "0"]).0, 2);
}

#[test]
fn injected_fault_exits_1() {
    let (code, _) = run(&["verify-lemmas", "--grid-preset", "quick", "--inject-fault"]);
    assert_eq!(code, 1);
}

#[test]
fn tail_values() {
    let (code, out) = run(&["tail", "--d", "2", "--coeffs", "1,1", "--t", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let line = out.lines().nth(1).unwrap();
    let s: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((s - 2.0 / 3.0).abs() < 1e-6);

    // single coefficient: a step at |a|
    let (_, out) = run(&["tail", "--d", "4", "--coeffs", "-1.5", "--t", "1.4,1.6", "--format", "csv"]);
    let vals: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(vals, vec![1.0, 0.0]);

    // without --t the csv is the distribution table
    let (code, out) = run(&["tail", "--d", "3", "--coeffs", "1,0.5", "--radial", "ball", "--format", "csv", "--grid-preset", "quick"]);
    assert_eq!(code, 0);
    let table = spheretail::sphere_sum::parse_csv(&out).unwrap();
    assert!(table.len() > 100);
    assert_eq!(table.last().unwrap().1, 1.0);
}

#[test]
fn tail_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out_path = dir.path().join("out.json");
    let code = bin()
        .args(["tail", "--d", "3", "--coeffs", "1,1", "--t", "1", "--table"])
        .arg(&path)
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap()
        .code();
    assert_eq!(code, Some(0));
    let table = spheretail::sphere_sum::parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(!table.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let s = v["survival"][0]["survival"].as_f64().unwrap();
    assert!((s - 0.75).abs() < 1e-6);
}

#[test]
fn compare_single_instance_and_columns() {
    let (code, out) = run(&["compare", "--d", "2", "--coeffs", "1,1", "--t", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("d,m,coefficients,t,lhs,rhs,ratio,regime"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let ratio: f64 = row[6].parse().unwrap();
    assert!((ratio - 1.099).abs() < 1e-3);
}

#[test]
fn counterexample_and_search() {
    let (code, out) = run(&["counterexample"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["crossing_d"].as_u64().unwrap() <= 200);

    let (code, out) = run(&["search-constant", "--d", "2", "--m-max", "1", "--budget", "6"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let best = v["best_ratio"].as_f64().unwrap();
    assert!((best / std::f64::consts::E - 1.0).abs() < 1e-3);
    assert_eq!(v["label"], "empirical best ratio");
}

#[test]
fn identical_runs_are_byte_identical() {
    let cmds: [&[&str]; 3] = [
        &["compare", "--grid-preset", "quick", "--instances", "6", "--seed", "5", "--format", "csv"],
        &["compare", "--grid-preset", "quick", "--instances", "4", "--seed", "5", "--mixture", "twopoint"],
        &["search-constant", "--d", "3", "--m-max", "3", "--budget", "30", "--seed", "8", "--format", "csv"],
    ];
    for args in cmds {
        let a = run(args);
        let mut with_threads = args.to_vec();
        with_threads.extend(["--threads", "3"]);
        let b = run(&with_threads);
        assert_eq!(a.0, 0);
        assert_eq!(a, b, "{args:?}");
    }
}
