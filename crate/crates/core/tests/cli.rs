use std::io::Write;
use std::process::{Command, Output};

use bmetric::demos::{example_2_1_map, example_2_1_space};
use bmetric::format::{parse_map, parse_space, write_map, write_space};
use bmetric::Rational;
use serde_json::Value;
use tempfile::NamedTempFile;

fn bmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmetric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn demos_exit_zero_when_reproduced() {
    let out = bmetric(&["demo", "example-2.1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("2 + 4·1 = 6") || text.contains("= 6"),
        "{text}"
    );
    let out = bmetric(&["demo", "example-3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn single_point_constants_are_one() {
    let f = file("points: 1\nmatrix:\n0\n");
    let out = bmetric(&["--format", "json", "constants", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = &v["classification"];
    for key in [
        "min_b_constant",
        "min_strong_b_constant",
        "min_metric_type_constant",
    ] {
        assert_eq!(c[key], "1", "{key}");
    }
    assert_eq!(c["is_metric"], true);
}

#[test]
fn example_constants_in_json() {
    let f = file(&write_space(&example_2_1_space()));
    let out = bmetric(&["--format", "json", "constants", path(&f)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = &v["classification"];
    assert_eq!(c["min_b_constant"], "2");
    assert_eq!(c["min_strong_b_constant"], "4");
    assert_eq!(c["min_metric_type_constant"], "2");
    assert_eq!(c["is_metric"], false);
}

#[test]
fn check_reports_asymmetry_with_exit_one() {
    let f = file("points: 2\nmatrix:\n0 2\n3 0\n");
    let out = bmetric(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let f = file("points: 2\nmatrix:\n0 2\n2 0\n");
    assert_eq!(bmetric(&["check", path(&f)]).status.code(), Some(0));
}

#[test]
fn parse_errors_exit_two() {
    let f = file("points: x\n");
    let out = bmetric(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        bmetric(&["check", "/nonexistent/space.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(bmetric(&["search", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn fixed_point_replay_and_picard() {
    let space = example_2_1_space();
    let f = file(&write_space(&space));
    let m = file(&write_map(&space, &example_2_1_map()));
    let out = bmetric(&[
        "--format",
        "json",
        "fixed-point",
        path(&f),
        path(&m),
        "--x0",
        "1",
        "--r",
        "6",
        "--k",
        "1/2",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["all_hold"], true, "{v}");
    assert_eq!(v["report"]["cond1_lhs"], "2");
    assert_eq!(v["report"]["cond1_rhs"], "3");
    // Hypotheses hold without a fixed point: a counterexample, reported as positive.
    assert_eq!(out.status.code(), Some(0));

    let out = bmetric(&[
        "fixed-point",
        path(&f),
        path(&m),
        "--x0",
        "1",
        "--r",
        "6",
        "--k",
        "1/10",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = bmetric(&["picard", path(&f), path(&m), "--x0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).to_lowercase().contains("cycle"));
}

#[test]
fn search_output_reparses() {
    let out = bmetric(&[
        "search",
        "--n",
        "3",
        "--palette",
        "1,2,6",
        "--k",
        "1/2",
        "--r",
        "6",
        "--max-results",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let blocks: Vec<&str> = text
        .split("---")
        .filter(|b| b.contains("points:"))
        .collect();
    assert_eq!(blocks.len(), 3, "{text}");
    for b in blocks {
        let start = b.find("points:").unwrap();
        let block = &b[start..];
        let space = parse_space(block).unwrap();
        let map = parse_map(block, &space).unwrap();
        assert_eq!(parse_space(&write_space(&space)).unwrap(), space);
        assert_eq!(parse_map(&write_map(&space, &map), &space).unwrap(), map);
        assert_eq!(space.min_strong_b_constant().to_string(), "4");
    }
}

#[test]
fn complete_subcommands() {
    let out = bmetric(&[
        "--format",
        "json",
        "complete",
        "rationals-abs",
        "--seq",
        "sqrt2",
        "--seq",
        "constant:0",
        "--i",
        "1000",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let iv = &v["pairs"][0]["interval"];
    let bound = |k: &str| iv[k].as_str().unwrap().parse::<Rational>().unwrap();
    let approx: Rational = "141421356/100000000".parse().unwrap();
    assert!(bound("lo") <= approx && approx <= bound("hi"));

    let out = bmetric(&[
        "complete",
        "example-3",
        "--seq",
        "example-3-quadruple",
        "--probe",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).to_lowercase().contains("clash"));

    let out = bmetric(&[
        "complete",
        "rationals-abs",
        "--probe",
        "--seq",
        "reciprocal",
        "--seq",
        "constant:0",
        "--seq",
        "constant:1",
        "--seq",
        "approach:1:1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    assert_eq!(
        bmetric(&["complete", "no-such-space", "--seq", "reciprocal"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_goes_to_stdout() {
    let out = bmetric(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("search"));
}
