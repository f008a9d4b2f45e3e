//! End-to-end tests of the `exacthom` binary: exit codes, golden output,
//! determinism, and the presentation parser subcommand.

use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_exacthom");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("EXACTHOM_MAX_NONZEROS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn list_names_all_scenarios() {
    let out = run(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(names.len(), 11);
    assert!(names.contains(&"hh-truncated"));
    assert!(names.contains(&"witt-ring"));
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let out = run(&["verify", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_window_is_a_usage_error() {
    let out = run(&["verify", "hh-truncated", "--window", "abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_format_is_a_usage_error() {
    let out = run(&["verify", "hh-truncated", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_mismatch_code() {
    // A window too narrow for the dual model comparison: checks fail but
    // the run itself completes.
    let out = run(&["verify", "cn-lemma", "--n", "1", "--window=-5:0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result: FAIL"));
}

#[test]
fn tiny_nonzero_cap_exits_with_resource_code() {
    let out = Command::new(BIN)
        .args(["verify", "hh-truncated", "--n", "3"])
        .env("EXACTHOM_MAX_NONZEROS", "5")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn limit_flag_overrides_environment_cap() {
    let out = Command::new(BIN)
        .args(["verify", "hh-truncated", "--n", "2", "--limit-nonzeros", "100000"])
        .env("EXACTHOM_MAX_NONZEROS", "5")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn csv_output_matches_golden_files() {
    for (args, golden) in [
        (
            vec!["verify", "hh-truncated", "--n", "2", "--format", "csv"],
            include_str!("golden/hh-truncated-n2.csv"),
        ),
        (
            vec![
                "verify",
                "laurent-dual",
                "--n",
                "1",
                "--u-order",
                "5",
                "--format",
                "csv",
            ],
            include_str!("golden/laurent-dual-n1-u5.csv"),
        ),
        (
            vec!["verify", "hp-point", "--n", "1", "--format", "csv"],
            include_str!("golden/hp-point-n1.csv"),
        ),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "args {:?}", args);
        assert_eq!(stdout(&out), golden, "args {:?}", args);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["verify", "laurent-dual", "--n", "1", "--format", "json"],
        vec!["verify", "witt-ring", "--seed", "7", "--format", "json"],
        vec!["verify", "amitsur", "--seed", "3", "--format", "csv"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), b.status.code(), "args {:?}", args);
        assert_eq!(a.stdout, b.stdout, "args {:?}", args);
    }
}

#[test]
fn json_output_has_schema_and_convention_hash() {
    let out = run(&["verify", "hh-truncated", "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["scenario"], "hh-truncated");
    assert_eq!(v["pass"], true);
    let hash = v["convention_hash"].as_str().expect("hash present");
    assert_eq!(hash.len(), 16);
    assert!(v["rows"].as_array().is_some_and(|r| !r.is_empty()));
}

#[test]
fn overriding_safe_ranges_warns_but_runs() {
    let out = run(&["verify", "hh-truncated", "--n", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let warnings = v["warnings"].as_array().expect("warnings array");
    assert!(!warnings.is_empty());
    let err = String::from_utf8(out.stderr).expect("utf8 stderr");
    assert!(err.contains("warning:"));
}

#[test]
fn parse_roundtrips_a_valid_presentation() {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(
        f,
        "base Q[x]\nkind commutative\ngenerator t degree -2 weight 1\n\
         relation t^3 = 0\ncurvature = -1*x*t\n"
    )
    .expect("write");
    let out = run(&["parse", f.path().to_str().expect("utf8 path")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("base Q[x]"));
    assert!(text.contains("generator t degree -2 weight 1"));
    assert!(text.contains("relation t^3 = 0"));
    assert!(text.contains("curvature = -x*t") || text.contains("curvature = -1*x*t"));
}

#[test]
fn parse_reports_line_and_column_on_errors() {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(f, "base Q\nkind commutative\ngenerator a degree 0\nd a = b").expect("write");
    let out = run(&["parse", f.path().to_str().expect("utf8 path")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).expect("utf8 stderr");
    assert!(err.contains("line 4"), "stderr was: {}", err);
}

#[test]
fn parse_missing_file_is_a_usage_error() {
    let out = run(&["parse", "/no/such/file.alg"]);
    assert_eq!(out.status.code(), Some(2));
}
