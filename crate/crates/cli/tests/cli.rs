use std::process::Command as Process;

use clap::Parser;
use focal_green_cli::{execute, run, CliError, MRange, RunConfig};
use serde_json::Value;

fn config(args: &[&str]) -> RunConfig {
    RunConfig::try_parse_from(std::iter::once("focal-green").chain(args.iter().copied())).unwrap()
}

fn json(args: &[&str]) -> Value {
    let outcome = run(&config(args)).unwrap();
    serde_json::from_str(&outcome.report).unwrap()
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_focal-green")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn write_jump_table(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("jump.csv");
    std::fs::write(&path, "t,f\n0,0\n0.97,0\n0.98,1000\n1,1000\n").unwrap();
    path.display().to_string()
}

#[test]
fn m_range_syntax() {
    assert_eq!("3".parse::<MRange>().unwrap(), MRange::single(3));
    assert_eq!("2..40".parse::<MRange>().unwrap(), MRange { lo: 2, hi: 40 });
    assert_eq!("2..=4".parse::<MRange>().unwrap(), MRange { lo: 2, hi: 4 });
    assert!("5..2".parse::<MRange>().is_err());
    assert!("a..2".parse::<MRange>().is_err());
    assert_eq!(MRange { lo: 1, hi: 8 }.to_string(), "1..8");
}

#[test]
fn eval_at_corner() {
    let report = json(&["eval", "--m", "1", "--t", "1", "--s", "1"]);
    assert_eq!(report["command"], "eval");
    assert_eq!(report["pass"], true);
    let d = &report["details"][0];
    assert_eq!(d["green_exact"], "1/3");
    assert!((d["green"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn eval_range_in_csv() {
    let outcome = run(&config(&["eval", "--m", "0..2", "--t", "1/2", "--s", "1/4", "--format", "csv"])).unwrap();
    let lines: Vec<&str> = outcome.report.lines().collect();
    assert_eq!(lines[0], "m,t,s,G,G_exact,M");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,1/2,1/4,0.25,1/4,"));
}

#[test]
fn max_for_m0_is_a_quarter() {
    let report = json(&["max", "--m", "0", "--tol", "1e-10"]);
    let d = &report["details"][0];
    assert!((d["t0"].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert!((d["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn coefficient_ratio_check_passes_full_range() {
    let report = json(&["verify-lemma3", "--m", "2..40"]);
    assert_eq!(report["pass"], true);
    let details = report["details"].as_array().unwrap();
    assert_eq!(details.len(), 39);
    assert_eq!(details[0]["oracle_agrees"], true);
    assert_eq!(details[38]["oracle_agrees"], Value::Null);
}

#[test]
fn identities_pass() {
    let report = json(&["verify-identities", "--m", "1..10"]);
    assert_eq!(report["pass"], true);
    assert!(report["details"].as_array().unwrap().iter().all(|d| d["q_hat_at_one"] == "2"));
}

#[test]
fn diagonal_check_and_grid_export() {
    let report = json(&["verify-diagonal", "--m", "0..2", "--grid-n", "41"]);
    assert_eq!(report["pass"], true);
    assert_eq!(report["params"]["grid_n"], 41);
    let csv = run(&config(&["verify-diagonal", "--m", "0..1", "--grid-n", "11", "--format", "csv"])).unwrap();
    let lines: Vec<&str> = csv.report.lines().collect();
    assert_eq!(lines[0], "m,t,s,M");
    assert_eq!(lines.len(), 1 + 2 * 11 * 11);
    assert_eq!(lines.iter().filter(|l| l.starts_with("m,")).count(), 1);
}

#[test]
fn inequality_margins_export() {
    let report = json(&["verify-inequalities", "--m", "1..3", "--grid-n", "21"]);
    assert_eq!(report["pass"], true);
    assert_eq!(report["details"][0]["pairs_checked"], 190);
    let csv = run(&config(&["verify-inequalities", "--m", "1", "--grid-n", "5", "--format", "csv"])).unwrap();
    assert_eq!(csv.report.lines().next(), Some("m,s,t,l10,l11"));
    assert!(csv.report.lines().any(|l| l.starts_with("1,0.25,1,,")));
}

#[test]
fn solve_manufactured_quartic() {
    let csv = run(&config(&["solve", "--m", "1", "--rhs", "24", "--grid-n", "21", "--format", "csv"])).unwrap();
    assert!(csv.pass);
    let last = csv.report.lines().last().unwrap();
    let x: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((x - 3.0).abs() < 1e-10);
}

#[test]
fn solve_from_table_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("f.csv");
    std::fs::write(&table, "t,f\n0,1\n1,1\n").unwrap();
    let out = dir.path().join("x.json");
    let cfg = config(&["solve", "--rhs-table", table.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    let mut stdout = Vec::new();
    let outcome = execute(&cfg, &mut stdout).unwrap();
    assert!(outcome.pass && stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let values = report["details"][0]["solution"]["values"].as_array().unwrap();
    assert!((values[100].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn failing_residuals_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_jump_table(&dir);
    let outcome = run(&config(&["solve", "--rhs-table", &table, "--grid-n", "41"])).unwrap();
    assert!(!outcome.pass);
    assert_eq!(outcome.exit_code(), 2);
    assert!(!outcome.violations.is_empty());
}

#[test]
fn invalid_configs_are_usage_errors() {
    let cases: [&[&str]; 5] = [
        &["verify-diagonal", "--grid-n", "2"],
        &["max", "--tol", "0"],
        &["solve", "--m", "0..2"],
        &["eval", "--t", "3/2", "--s", "0"],
        &["verify-lemma3", "--m", "1"],
    ];
    for args in cases {
        match run(&config(args)) {
            Err(e @ CliError::Usage(_)) => assert_eq!(e.exit_code(), 1),
            other => panic!("{args:?}: {other:?}"),
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify-inequalities", "--m", "1..4", "--grid-n", "31"];
    assert_eq!(run(&config(&args)).unwrap().report, run(&config(&args)).unwrap().report);
    let args = ["verify-diagonal", "--m", "0..3", "--grid-n", "31", "--format", "csv"];
    assert_eq!(run(&config(&args)).unwrap().report, run(&config(&args)).unwrap().report);
}

#[test]
fn binary_exit_codes() {
    let (code, stdout, _) = binary(&["eval", "--m", "1", "--t", "1", "--s", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"green_exact\": \"1/3\""));
    assert_eq!(binary(&["--help"]).0, 0);
    assert_eq!(binary(&["no-such-command"]).0, 1);
    assert_eq!(binary(&["max", "--m", "4..2"]).0, 1);
    assert_eq!(binary(&["verify-diagonal", "--grid-n", "1"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let table = write_jump_table(&dir);
    let (code, _, stderr) = binary(&["solve", "--rhs-table", &table, "--grid-n", "41"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("violation"));
    let missing = dir.path().join("missing.csv");
    assert_eq!(binary(&["solve", "--rhs-table", missing.to_str().unwrap()]).0, 1);
}
