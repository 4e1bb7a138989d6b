use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monord"))
        .args(args)
        .output()
        .expect("spawn monord")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn check_exit_codes() {
    assert_eq!(
        code(&run(&["check", &fixture("gorenstein_not_bass.txt")])),
        0
    );
    let bad = run(&["check", &fixture("not_an_order.txt")]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("not an order"));
    let ragged = run(&["check", &fixture("ragged.txt")]);
    assert_eq!(code(&ragged), 2);
    assert!(String::from_utf8_lossy(&ragged.stderr).contains("ragged.txt:3:"));
    assert_eq!(code(&run(&["check", "/nonexistent/level.txt"])), 2);
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monord"))
        .args(["--format", "json", "classify", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# period two\n2\n0 0\n2 0\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    let v = &json_lines(&out)[0]["report"];
    assert_eq!(v["is_bass"], Value::Bool(true));
    assert_eq!(v["bass_reason"], "eichler_period_two");
}

#[test]
fn text_and_json_verdicts_agree() {
    for name in [
        "gorenstein_not_bass.txt",
        "non_gorenstein_overorder.txt",
        "period_two.json",
    ] {
        let path = fixture(name);
        let text = stdout(&run(&["classify", &path]));
        let json = json_lines(&run(&["--format", "json", "classify", &path]));
        let r = &json[0]["report"];
        let yes_no = |v: &Value| if v == &Value::Bool(true) { "yes" } else { "no" };
        for (label, key) in [
            ("gorenstein", "is_gorenstein"),
            ("hereditary", "is_hereditary"),
            ("bass", "is_bass"),
        ] {
            let line = text
                .lines()
                .find(|l| l.split_whitespace().next() == Some(label))
                .unwrap_or_else(|| panic!("{label} missing for {name}"));
            assert_eq!(
                line.split_whitespace().nth(1),
                Some(yes_no(&r[key])),
                "{name}: {label}"
            );
        }
    }
}

#[test]
fn classify_non_order_is_negative() {
    let out = run(&["--format", "json", "classify", &fixture("not_an_order.txt")]);
    assert_eq!(code(&out), 1);
    let r = &json_lines(&out)[0]["report"];
    assert_eq!(r["is_order"], Value::Bool(false));
    assert_eq!(r["is_gorenstein"], Value::Null);
}

#[test]
fn oracle_agrees_on_fixtures() {
    for name in ["gorenstein_not_bass.txt", "period_two.json"] {
        let out = run(&["--format", "json", "classify", "--oracle", &fixture(name)]);
        assert_eq!(code(&out), 0, "{name}");
        let v = &json_lines(&out)[0];
        assert_eq!(v["report"]["is_bass"], v["oracle"]["is_bass"]);
    }
}

#[test]
fn oracle_budget_is_an_input_error() {
    let out = run(&[
        "--budget",
        "5",
        "classify",
        "--oracle",
        &fixture("gorenstein_not_bass.txt"),
    ]);
    assert_eq!(code(&out), 2);
    let env = Command::new(env!("CARGO_BIN_EXE_monord"))
        .env("MONORD_BUDGET", "5")
        .args(["overorders", &fixture("gorenstein_not_bass.txt")])
        .output()
        .unwrap();
    assert_eq!(code(&env), 2);
}

#[test]
fn dual_and_overorders() {
    let out = run(&["--format", "json", "dual", &fixture("period_two.json")]);
    assert_eq!(code(&out), 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["raw"]["m"], serde_json::json!([[0, -2], [0, 0]]));
    assert_eq!(v["normalized"]["m"], serde_json::json!([[0, 0], [0, 2]]));
    assert_eq!(code(&run(&["dual", &fixture("not_an_order.txt")])), 2);

    let out = run(&["overorders", &fixture("gorenstein_not_bass.txt")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("42 overorders"));
    let dump = run(&[
        "--format",
        "json",
        "overorders",
        "--dump",
        &fixture("period_two.json"),
    ]);
    assert_eq!(json_lines(&dump)[0]["members"].as_array().unwrap().len(), 6);
}

#[test]
fn projective_exit_codes() {
    let p = fixture("period_two.json");
    assert_eq!(code(&run(&["projective", &p, "--type", "0,2"])), 0);
    assert_eq!(code(&run(&["projective", &p, "--type", "0,1"])), 1);
    assert_eq!(code(&run(&["projective", &p, "--type", "0,3"])), 2);
    assert_eq!(code(&run(&["projective", &p, "--type", "0,0,0"])), 2);
}

#[test]
fn small_censuses() {
    let one = json_lines(&run(&["--format", "json", "census", "--n", "1"]));
    assert_eq!(one.len(), 2);
    assert_eq!(one[1]["totals"]["classes"], 1);

    let out = run(&["--format", "json", "census", "--n", "2", "--bound", "2"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["candidates"], 3);
    assert_eq!(summary["totals"]["classes"], 3);
    assert_eq!(summary["totals"]["hereditary"], 2);

    let filtered = json_lines(&run(&[
        "--format",
        "json",
        "census",
        "--n",
        "2",
        "--bound",
        "2",
        "--filter",
        "hereditary",
    ]));
    assert_eq!(filtered.last().unwrap()["totals"]["classes"], 2);
    assert_eq!(
        code(&run(&["census", "--n", "2", "--filter", "nonsense"])),
        2
    );
}

#[test]
fn census_families_table() {
    let out = run(&[
        "census",
        "--n",
        "4",
        "--bound",
        "2",
        "--filter",
        "gorenstein",
        "--families",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for family in [
        "maximal",
        "eichler-3-1",
        "eichler-2-2",
        "eichler-2-1-1",
        "eichler-1-1-1-1",
        "split-a-b",
        "split-ab-ab",
    ] {
        assert!(text.contains(family), "{family} missing");
    }
    assert_eq!(code(&run(&["census", "--n", "3", "--families"])), 2);
}

#[test]
fn several_files_report_worst_status() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&good, r#"{"n": 3, "m": [[0, 0, 0], [1, 0, 0], [1, 1, 0]]}"#).unwrap();
    std::fs::write(&bad, "3\n0 2 0\n0 0 0\n0 1 0\n").unwrap();
    let (g, b) = (good.to_str().unwrap(), bad.to_str().unwrap());

    let out = run(&["--format", "json", "check", g, b]);
    assert_eq!(code(&out), 1);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["is_order"], Value::Bool(true));
    assert_eq!(lines[1]["is_order"], Value::Bool(false));

    let out = run(&["--format", "json", "classify", g]);
    assert_eq!(code(&out), 0);
    let r = &json_lines(&out)[0]["report"];
    assert_eq!(r["is_hereditary"], Value::Bool(true));
    assert_eq!(r["eichler"]["period"], 3);
}
