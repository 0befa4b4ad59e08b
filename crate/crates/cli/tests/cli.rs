use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ilp_cli::format::{parse_program, program_doc};
use ilp_core::transforms::{add_slack, flip_objective, split_equations, substitute_nonneg};
use ilp_core::transforms::TransformKind;
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn ilp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilp"))
        .args(args)
        .output()
        .expect("ilp runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FIXED: &str = r#"{
    "sense": "min",
    "objective": [["-1", "1/2"], "1"],
    "rows": [
        {"coeffs": ["1", "1"], "rel": "eq", "rhs": ["1", "2"]},
        {"coeffs": ["1", "-1"], "rel": "le", "rhs": "1"}
    ],
    "vars": [{"name": "u", "sign": "free"}, {"name": "v", "sign": "nonneg"}]
}"#;

const UNDECIDED: &str = r#"{
    "sense": "min",
    "objective": ["1", "1"],
    "rows": [
        {"coeffs": [["1", "2"], "1"], "rel": "eq", "rhs": "1"},
        {"coeffs": ["1", "1"], "rel": "eq", "rhs": "1"}
    ],
    "vars": [{"name": "a", "sign": "free"}, {"name": "b", "sign": "free"}]
}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn range_of_example_one() {
    let f = fixture("example1");
    let o = ilp(&["range", path(&f), "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[-inf, -1]");

    let o = ilp(&["--format", "json", "range", path(&f)]);
    let v = json(&o);
    assert_eq!(v["lower"], "-inf");
    assert_eq!(v["upper"], "-1");
    assert_eq!(v["upper_witness"]["scenario"]["outcome"]["status"], "optimal");
}

#[test]
fn solve_center_and_given_scenarios() {
    let dir = TempDir::new().unwrap();
    let f = fixture("example3a");
    let o = ilp(&["--format", "json", "solve", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["scenario"]["outcome"]["value"], "1/2");

    // ids: objective 0, row coefficient 1, rhs 2
    let a = write(&dir, "a.json", r#"{"0": "0", "1": "1", "2": "1"}"#);
    let o = ilp(&["solve", path(&f), "--scenario", path(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("optimal\nvalue: 0\n"), "{}", stdout(&o));

    let bad = write(&dir, "bad.json", r#"{"0": "2", "1": "1", "2": "1"}"#);
    let o = ilp(&["solve", path(&f), "--scenario", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn transform_output_round_trips_with_provenance() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("example1", "flip", TransformKind::Flip),
        ("example1", "slack", TransformKind::Slack),
        ("example1", "split", TransformKind::SplitEq),
        ("example2", "nonneg", TransformKind::NonnegSub),
        ("example3b", "split", TransformKind::SplitEq),
    ];
    for (name, op, kind) in cases {
        let src = fixture(name);
        let out = dir.path().join(format!("{name}-{op}.json"));
        let o = ilp(&["transform", path(&src), "--op", op, "-o", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{name} {op}");

        let p = parse_program(&fs::read_to_string(&src).unwrap()).unwrap();
        let q = parse_program(&fs::read_to_string(&out).unwrap()).unwrap();
        let expected = match kind {
            TransformKind::Flip => flip_objective(&p),
            TransformKind::Slack => add_slack(&p),
            TransformKind::SplitEq => split_equations(&p),
            TransformKind::NonnegSub => substitute_nonneg(&p, &[0, 1]).unwrap(),
        };
        assert!(q.same_program(&expected.0), "{name} {op}");
        assert_eq!(q.classify(), expected.0.classify());
        assert_eq!(q.provenance().last(), Some(&expected.1));
        assert_eq!(program_doc(&q), program_doc(&expected.0));

        let again = dir.path().join(format!("{name}-{op}-flip.json"));
        let o = ilp(&["transform", path(&out), "--op", "flip", "-o", path(&again)]);
        assert_eq!(o.status.code(), Some(0));
        let r = parse_program(&fs::read_to_string(&again).unwrap()).unwrap();
        assert_eq!(r.provenance().len(), 2);
        assert_eq!(r.provenance()[0], expected.1);
    }
}

#[test]
fn transform_selects_variables_by_name_or_index() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "fixed.json", FIXED);
    let by_name = dir.path().join("n.json");
    let by_index = dir.path().join("i.json");
    let o = ilp(&["transform", path(&f), "--op", "nonneg", "--vars", "u", "-o", path(&by_name)]);
    assert_eq!(o.status.code(), Some(0));
    let o = ilp(&["transform", path(&f), "--op", "nonneg", "--vars", "0", "-o", path(&by_index)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&by_name).unwrap(), fs::read(&by_index).unwrap());
    let o = ilp(&["transform", path(&f), "--op", "nonneg", "--vars", "v", "-o", path(&by_name)]);
    assert_eq!(o.status.code(), Some(2), "v is not free");
}

#[test]
fn dualize_writes_the_dual() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("dual.json");
    let o = ilp(&["dualize", path(&fixture("example1")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let d = parse_program(&fs::read_to_string(&out).unwrap()).unwrap();
    let q = parse_program(&fs::read_to_string(fixture("example2")).unwrap()).unwrap();
    assert_eq!(d.num_vars(), q.num_vars());
    assert_eq!(d.num_rows(), q.num_rows());
}

#[test]
fn feasibility_and_optimality_queries() {
    let dir = TempDir::new().unwrap();
    let e1 = fixture("example1");
    let o = ilp(&["check-feasible", path(&e1), "--point", "0,0"]);
    assert_eq!(stdout(&o).trim(), "weakly feasible: true");
    let o = ilp(&["--format", "json", "check-feasible", path(&e1), "--point", "1,2"]);
    assert_eq!(json(&o)["weakly_feasible"], false);

    let o = ilp(&["check-optimal", path(&e1), "--point", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "weakly optimal: true");
    let o = ilp(&["check-optimal", path(&e1), "--point", "0,0"]);
    assert_eq!(o.status.code(), Some(3), "search cannot rule it out");

    let f = write(&dir, "fixed.json", FIXED);
    // With c_u < 1 the optimum pushes u up to min(3/2, (1 + b)/2).
    let o = ilp(&["--format", "json", "check-optimal", path(&f), "--point", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["weakly_optimal"], true);
    for (x, ok) in [("5/4,1/4", true), ("3/2,1/2", true), ("0,2", false), ("1,1", false)] {
        let o = ilp(&["check-optimal", path(&f), "--point", x]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with(&format!("weakly optimal: {ok}")), "{x}");
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{\n  \"sense\": \"min\",\n  \"objective\": [1]\n}");
    let o = ilp(&["range", path(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = ilp(&["--format", "json", "range", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["code"], 2);

    let o = ilp(&["check-feasible", path(&fixture("example1")), "--point", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ilp(&["check-feasible", path(&fixture("example1")), "--point", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ilp(&["verify", "--theorem", "thm4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ilp(&["verify", "--theorem", "thm1", "--dims", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undecided_and_capped_questions_exit_three() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "undecided.json", UNDECIDED);
    let o = ilp(&["range", path(&f), "--method", "formula"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ilp(&["range", path(&f), "--method", "enumerate"]);
    assert_eq!(stdout(&o).trim(), "[1, 1]");
    let o = ilp(&["range", path(&fixture("example1")), "--cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fixtures_pass_and_the_aliased_split_breaks_one() {
    let o = ilp(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 8);

    let o = ilp(&["fixtures", "--name", "example1-split", "--mutation", "aliased-split"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    let o = ilp(&["--format", "json", "fixtures", "--name", "example2", "--show"]);
    assert_eq!(json(&o)[0]["name"], "example2");
}

#[test]
fn verify_and_replay() {
    let dir = TempDir::new().unwrap();
    let o = ilp(&["verify", "--theorem", "thm1", "--trials", "50", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("thm1: pass (50 trials"));

    let report = dir.path().join("report.json");
    let args = [
        "verify", "--theorem", "thm1", "--trials", "80", "--seed", "5",
        "--mutation", "half-split", "--dims", "3,2", "--report", path(&report),
    ];
    let without_time = |mut v: Value| {
        v[0]["elapsed_ms"] = Value::Null;
        v
    };
    let first = ilp(&args);
    assert_eq!(first.status.code(), Some(1));
    let reports: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    ilp(&args);
    let again: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(without_time(again), without_time(reports.clone()));
    let failures = reports[0]["failures"].as_array().unwrap().len();
    assert!(failures > 0);

    let o = ilp(&["--format", "json", "replay", path(&report)]);
    assert_eq!(o.status.code(), Some(1));
    let results = json(&o);
    let results = results.as_array().unwrap();
    assert_eq!(results.len(), failures);
    assert!(results.iter().all(|r| r["reproduced"] == true));
}
