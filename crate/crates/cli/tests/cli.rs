use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn slidewin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slidewin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_spec(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const LEFT_IDEAL: &str =
    r#"{"op": "leaf", "regex": "(a|b)*a(a|b)*", "alphabet": "ab", "pad": "b", "tag": "left-ideal"}"#;
const SUFFIX_FREE: &str = r#"{"op": "leaf", "regex": "ab*", "alphabet": "ab", "pad": "b", "tag": "suffix-free"}"#;

#[test]
fn classify_prints_table_and_json() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("v.json");
    let o = slidewin(&["classify", "--regex", "(a|b|c)*a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("YES").count(), 5);
    assert!(text.contains("rand-zero      O(1)"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["classes"]["LI-Len"], true);
    assert_eq!(v["settings"]["det-zero"], "Const");
}

#[test]
fn classify_lists_witnesses_for_failed_classes() {
    let o = slidewin(&["classify", "--regex", "(a|b|c)*a(a|b|c)*"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("det-zero       O(log n)"));
    assert!(text.contains("rand-failure   O(1)"));
    assert!(text.contains("witness ST-Len"));
    assert!(!text.contains("witness LI-Len"));
}

#[test]
fn classify_reads_dfa_files() {
    let dir = TempDir::new().unwrap();
    let dfa = r#"{"alphabet": ["a", "b"], "states": 2, "initial": 0, "finals": [1], "delta": [[1, 0], [1, 0]]}"#;
    let path = write_spec(dir.path(), "sigma_a.json", dfa);
    let o = slidewin(&["classify", "--lang", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).matches("YES").count(), 5);
}

#[test]
fn run_left_ideal_meets_failure_ratio() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "li.json", LEFT_IDEAL);
    let out = dir.path().join("report.json");
    let csv = dir.path().join("report.csv");
    let args = [
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--setting",
        "rand-failure=0.1",
        "--n",
        "256",
        "--stream",
        "uniform:2048",
        "--trials",
        "2000",
        "--eps",
        "0.3333",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ];
    let o = slidewin(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let report = &doc["report"];
    assert_eq!(report["algorithm"]["algorithm"], "const_left_ideal");
    assert_eq!(report["errors"].as_array().unwrap().len(), 2049);
    assert!(report["failure_ratio"].as_f64().unwrap() <= 0.1);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 2050);

    // same seed, same bytes; the worker count does not matter
    let first = fs::read(&out).unwrap();
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "2"]);
    assert_eq!(slidewin(&with_jobs).status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn run_reports_check_failures_with_exit_one() {
    // a zero error threshold cannot hold for the randomized algorithm
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "li.json", LEFT_IDEAL);
    let o = slidewin(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--setting",
        "rand-failure=0.1",
        "--n",
        "256",
        "--stream",
        "literal:a+repeat:b:600",
        "--trials",
        "500",
        "--eps",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn run_suffix_free_rand_zero() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "sf.json", SUFFIX_FREE);
    let o = slidewin(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--setting",
        "rand-zero",
        "--n",
        "16",
        "--stream",
        "literal:a+repeat:b:79",
        "--trials",
        "300",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("algorithm      amplify"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "li.json", LEFT_IDEAL);
    let spec = spec.to_str().unwrap();
    let bad_setting = slidewin(&[
        "run",
        "--spec",
        spec,
        "--setting",
        "fast",
        "--n",
        "4",
        "--stream",
        "literal:a",
    ]);
    assert_eq!(bad_setting.status.code(), Some(2));
    let bad_stream = slidewin(&[
        "run",
        "--spec",
        spec,
        "--setting",
        "det-zero",
        "--n",
        "4",
        "--stream",
        "zigzag",
    ]);
    assert_eq!(bad_stream.status.code(), Some(2));
    let foreign = slidewin(&[
        "run",
        "--spec",
        spec,
        "--setting",
        "det-zero",
        "--n",
        "4",
        "--stream",
        "literal:abc",
    ]);
    assert_eq!(foreign.status.code(), Some(2));
    assert_eq!(slidewin(&["classify"]).status.code(), Some(2));
    assert_eq!(
        slidewin(&["witness", "--regex", "a*", "--class", "XY"]).status.code(),
        Some(2)
    );
    let wrong_tag = write_spec(
        dir.path(),
        "bad.json",
        r#"{"op": "leaf", "regex": "a*b", "alphabet": "ab", "tag": "left-ideal"}"#,
    );
    let o = slidewin(&[
        "run",
        "--spec",
        wrong_tag.to_str().unwrap(),
        "--setting",
        "det-zero",
        "--n",
        "4",
        "--stream",
        "literal:a",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("left-ideal"));
}

#[test]
fn witness_prints_validated_words() {
    let o = slidewin(&["witness", "--regex", "a(a|b|c)*", "--class", "LI-Len"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("LinearGap for LI-Len"));
    assert!(text.contains(", 0 violated"));
    assert!(!text.contains("FAIL"));
    // a class the language belongs to has no witness
    assert_eq!(
        slidewin(&["witness", "--regex", "(a|b|c)*a", "--class", "LI-Len"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_space_fits_shapes() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "li.json", LEFT_IDEAL);
    let out = dir.path().join("growth.json");
    let o = slidewin(&[
        "bench-space",
        "--spec",
        spec.to_str().unwrap(),
        "--setting",
        "det-zero",
        "--n-range",
        "2^4..2^12",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("best fit log n"));
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(g["best"], "log");
    assert_eq!(g["ns"].as_array().unwrap().len(), 9);
    let bad = slidewin(&[
        "bench-space",
        "--spec",
        spec.to_str().unwrap(),
        "--setting",
        "det-zero",
        "--n-range",
        "3..9",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_runs_selected_criteria() {
    let o = slidewin(&["verify", "--criterion", "1", "--criterion", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(slidewin(&["verify", "--criterion", "12"]).status.code(), Some(2));
}
