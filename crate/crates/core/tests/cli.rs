//! CLI contract: exit codes and output schemas.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_oscibayes")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn success_is_zero() {
    let (code, stdout, _) = run(&["density", "--theta", "0", "--x", "0.37"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "1.00000000000000000e0");
}

#[test]
fn validation_errors_exit_two() {
    // out-of-support point
    let (code, _, stderr) = run(&["density", "--theta", "1", "--x", "1.5"]);
    assert_eq!(code, 2, "{stderr}");
    // negative parameter
    let (code, _, _) = run(&["density", "--theta=-1", "--x", "0.5"]);
    assert_eq!(code, 2);
    // unknown metric
    let (code, _, _) = run(&[
        "metric",
        "--kind",
        "wasserstein",
        "--theta-a",
        "1",
        "--theta-b",
        "2",
    ]);
    assert_eq!(code, 2);
    // unsupported format
    let (code, _, _) = run(&["sample", "--theta", "1", "--n", "3", "--format", "json"]);
    assert_eq!(code, 2);
    // bad config file
    let dir = std::env::temp_dir().join("oscibayes-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "family = cosine\n").unwrap();
    let (code, _, _) = run(&["experiment", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn numerical_failures_exit_three() {
    // an impossible panel budget cannot converge on an oscillatory integrand
    let (code, _, stderr) = run(&[
        "metric",
        "--kind",
        "hellinger",
        "--theta-a",
        "1000000",
        "--theta-b",
        "0",
        "--max-panels",
        "10",
    ]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("quadrature"), "{stderr}");

    // theta_max far below the prior's bulk leaves no likelihood mass
    let (code, _, stderr) = run(&[
        "posterior",
        "--prior",
        "truncated-uniform:50,60",
        "--theta-star",
        "1",
        "--n",
        "5",
        "--theta-max",
        "10",
    ]);
    assert_eq!(code, 3, "{stderr}");
}

#[test]
fn posterior_csv_schema() {
    let (code, stdout, _) = run(&[
        "posterior",
        "--prior",
        "truncated-uniform:0,10",
        "--theta-star",
        "3",
        "--n",
        "5",
        "--seed",
        "1",
        "--theta-max",
        "10",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("theta,log_weight"));
    assert!(stdout.lines().next_back().unwrap().starts_with("# log_normalizer = "));
}

#[test]
fn oscillations_csv_lists_intervals() {
    let two_pi = format!("{}", 2.0 * std::f64::consts::PI);
    let (code, stdout, _) = run(&[
        "oscillations",
        "--theta-a",
        &two_pi,
        "--theta-b",
        "0",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("a,b\n"));
    assert!(stdout.trim_end().ends_with("# count = 2"));
}
