use std::path::PathBuf;
use std::process::{Command, Output};

fn centering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_centering"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(format!("fixtures/discourse-{name}.centering.json"))
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_prints_trace() {
    let o = centering(&["analyze", &fixture("07")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("kind\tdiscourse\t"));
    assert_eq!(
        out.lines().filter(|l| l.starts_with("reading\t")).count(),
        4
    );
    let all = stdout(&centering(&["analyze", "--all", &fixture("07")]));
    assert!(all.lines().count() > out.lines().count());
}

#[test]
fn machine_output_is_json_lines() {
    for args in [
        vec!["--format", "machine", "analyze"],
        vec!["--format", "machine", "stats"],
        vec!["--format", "machine", "resolve"],
        vec!["--format", "machine", "validate"],
        vec!["--format", "machine", "eval"],
    ] {
        let mut args = args.clone();
        let f = fixture("19");
        args.push(&f);
        let o = centering(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        for line in stdout(&o).lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v["record"].is_string(), "{line}");
        }
    }
}

#[test]
fn stats_reports_tables_and_chi_square() {
    let files: Vec<String> = [
        "07", "08", "09", "10", "11", "12", "13", "17", "18", "19", "20",
    ]
    .iter()
    .map(|n| fixture(n))
    .collect();
    let mut args = vec!["stats"];
    args.extend(files.iter().map(String::as_str));
    let out = stdout(&centering(&args));
    assert!(out.contains("utterances (excluding discourse-initial) 48"));
    assert!(out.contains("chi-square (CONTINUE vs other, zero vs none) = 11.681"));
    let with_zero = out.lines().find(|l| l.starts_with("with zero")).unwrap();
    assert_eq!(
        with_zero.split_whitespace().skip(2).collect::<Vec<_>>(),
        vec!["19", "5", "5", "6"]
    );
    let cues = out.lines().find(|l| l.starts_with("rough-shift")).unwrap();
    assert_eq!(
        cues.split_whitespace().skip(1).collect::<Vec<_>>(),
        vec!["2", "1", "1"]
    );
}

#[test]
fn stats_without_variation_reports_undefined() {
    let out = stdout(&centering(&["stats", &fixture("07")]));
    assert!(out.contains("undefined"));
}

#[test]
fn resolve_and_eval() {
    let out = stdout(&centering(&["resolve", &fixture("20")]));
    assert!(out.contains(
        "discourse-20\t6\tSUBJECT@0\t{CVD-DEVICES, ETCHING-DEVICES}\tROUGH-SHIFT\tAGREEMENT"
    ));
    let o = centering(&["eval", &fixture("13")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("accuracy 100.0%"));
    let o = centering(&["--no-global", "eval", &fixture("13")]);
    assert!(stdout(&o).contains("discourse-13\t6\t0\tUNRESOLVED"));
}

#[test]
fn ablation_flags_change_results() {
    let out = stdout(&centering(&[
        "--no-zta",
        "analyze",
        "--all",
        &fixture("07"),
    ]));
    assert!(!out.contains("ZTA-CONTINUE"));
    let out = stdout(&centering(&["--no-global", "resolve", &fixture("13")]));
    assert!(out.contains("discourse-13\t6\tSUBJECT@0\tUNRESOLVED"));
    let narrow = stdout(&centering(&[
        "--beam",
        "1",
        "analyze",
        "--all",
        &fixture("08"),
    ]));
    assert_eq!(
        narrow
            .lines()
            .filter(|l| l.split('\t').nth(4) == Some("true"))
            .count(),
        4
    );
}

#[test]
fn validate_accepts_fixtures_and_reports_violations() {
    let o = centering(&["validate", &fixture("18")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("1 discourse(s), ok\n"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.centering.json");
    let text = std::fs::read_to_string(fixture("07")).unwrap();
    std::fs::write(&bad, text.replacen("\"wa\": true", "\"wa\": false", 1)).unwrap();
    let o = centering(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("is TOPIC but not wa-marked"));
    let o = centering(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn format_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.centering.json");
    std::fs::write(&bad, "[{\"id\": \"x\",\n \"entities\": 3}]").unwrap();
    let o = centering(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":2:"), "{err}");

    assert_eq!(
        centering(&["analyze", "/nonexistent/file.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(centering(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        centering(&["--beam", "0", "analyze", &fixture("07")])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn empty_file_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.centering.json");
    std::fs::write(&empty, "").unwrap();
    let o = centering(&["analyze", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(centering(&["--help"]).status.code(), Some(0));
    assert_eq!(centering(&["--version"]).status.code(), Some(0));
}
