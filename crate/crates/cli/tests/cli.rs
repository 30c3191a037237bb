use std::process::{Command, Output};

use cuboid_core::coeffs::CoefficientSet;
use cuboid_core::cuboidcheck::CuboidReport;
use cuboid_core::curves::SearchRow;
use cuboid_core::Rational;
use serde::{Deserialize, Serialize};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(args)
        .env_remove("CUBOID_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[derive(Serialize, Deserialize)]
struct CheckJson {
    schema_version: u32,
    #[serde(flatten)]
    report: CuboidReport,
}

#[derive(Serialize, Deserialize)]
struct CoeffsJson {
    schema_version: u32,
    b: Rational,
    c: Rational,
    degenerate: bool,
    vanishing_guards: Vec<String>,
    coefficients: Option<CoefficientSet<Rational>>,
}

#[derive(Deserialize)]
struct SearchJson {
    schema_version: u32,
    curve: u8,
    points: Vec<SearchRow>,
}

#[test]
fn verify_discriminants() {
    let o = run(&["verify", "--discriminants"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("= -1048576").count(), 2, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"), "{out}");
    for t in ["2.1", "2.2", "2.3", "2.4", "3.1", "3.2", "4.1", "5.1"] {
        assert!(out.contains(&format!("PASS theorem {t}:")), "{t}");
    }
}

#[test]
fn verify_single_theorem() {
    let o = run(&["verify", "--theorem", "5.1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS theorem 5.1: P(1) = 0"));
    assert!(out.contains("Q8.2 [d^0]"));
}

#[test]
fn check_degenerate_point() {
    let o = run(&["check", "--b", "1/1", "--c", "2/1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: Degenerate"));
}

#[test]
fn check_json_round_trips() {
    let o = run(&["check", "--b", "1", "--c", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let parsed: CheckJson = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.schema_version, 1);
    assert_eq!(parsed.report.verdict, cuboid_core::Verdict::ReducibleButNotCuboid);
    let again = serde_json::to_value(&parsed).unwrap();
    let original: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(again, original);
}

#[test]
fn coeffs_json_round_trips() {
    for (b, c) in [("1", "1"), ("-3/7", "5/2"), ("1", "2")] {
        let o = run(&["coeffs", "--b", b, "--c", c, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let parsed: CoeffsJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.degenerate, parsed.coefficients.is_none());
        let again = serde_json::to_value(&parsed).unwrap();
        assert_eq!(again, serde_json::from_str::<serde_json::Value>(&text).unwrap());
    }
}

#[test]
fn coeffs_reports_vanishing_guard() {
    let o = run(&["coeffs", "--b", "1", "--c", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degenerate"));
    assert!(out.contains("f1 = bc - 1 - b"));
}

#[test]
fn coeffs_text() {
    let out = stdout(&run(&["coeffs", "--b", "1", "--c", "1"]));
    assert!(out.starts_with("E10 = 1/2\nE20 = -3/8\nE30 = 0\n"), "{out}");
}

#[test]
fn classify_overlapping_cases() {
    let out = stdout(&run(&["classify", "--b", "-1/2", "--c", "0"]));
    assert!(out.contains("cases: 2 5"));
    assert!(out.contains("residual (case 8 variety): 0"));
}

#[test]
fn curve_search_small() {
    let o = run(&["curve-search", "--curve", "7", "--height", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: SearchJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(parsed.schema_version, 1);
    assert_eq!(parsed.curve, 7);
    assert_eq!(parsed.points.len(), 4);
    assert!(parsed.points.iter().all(|p| p.exceptional));
}

#[test]
fn search_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for jobs in ["1", "8"] {
        let csv = dir.path().join(format!("s{jobs}.csv"));
        let o = run(&[
            "curve-search", "--curve", "8", "--height", "40", "--jobs", jobs,
            "--csv", csv.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        outs.push((o.stdout, std::fs::read(&csv).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let csv = String::from_utf8(outs[0].1.clone()).unwrap();
    assert!(csv.starts_with("curve,c_num,c_den,y_num,y_den,height,exceptional\n"));
}

#[test]
fn jobs_default_from_environment() {
    let base = run(&["curve-search", "--curve", "7", "--height", "12"]);
    let o = Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(["curve-search", "--curve", "7", "--height", "12"])
        .env("CUBOID_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, base.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_cuboid"))
        .args(["curve-search", "--curve", "7", "--height", "12"])
        .env("CUBOID_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn scan_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for jobs in ["1", "8"] {
        let csv = dir.path().join(format!("g{jobs}.csv"));
        let o = run(&["scan", "--grid", "2", "--jobs", jobs, "--csv", csv.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        outs.push((o.stdout, std::fs::read(&csv).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    assert!(String::from_utf8_lossy(&outs[0].0).contains("49 points"));
}

#[test]
fn scan_case_points_are_reducible() {
    for case in ["1", "2", "3", "4", "5", "6"] {
        let out = stdout(&run(&["scan", "--grid", "3", "--case", case]));
        assert!(out.contains(" 0 irreducible"), "case {case}: {out}");
        assert!(out.contains(" 0 perfect cuboid"));
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["frobnicate"],
        &["curve-search", "--curve", "9", "--height", "3"],
        &["curve-search", "--curve", "7", "--height", "0"],
        &["curve-search", "--curve", "7", "--height", "3", "--jobs", "0"],
        &["verify"],
        &["verify", "--all", "--identity17"],
        &["coeffs", "--b", "1.5", "--c", "1"],
        &["check", "--b", "1/0", "--c", "1"],
        &["scan", "--grid", "2", "--case", "9"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unwritable_csv_is_a_usage_error() {
    let o = run(&["curve-search", "--curve", "7", "--height", "2", "--csv", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
