//! End-to-end tests of the `pqd` binary: every subcommand is exercised
//! through its public interface, checking files on disk and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn pqd(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pqd"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn pqd_ok(args: &[&str], dir: &Path) -> String {
    let out = pqd(args, dir);
    assert!(
        out.status.success(),
        "pqd {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is UTF-8")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn generate_is_deterministic_and_row_counted() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    for run in ["a", "b"] {
        std::fs::create_dir(dir.join(run)).expect("mkdir");
        let stdout = pqd_ok(
            &[
                "generate",
                "--classes",
                "S1,S2",
                "--per-class",
                "10",
                "--seed",
                "42",
                "--out",
                &format!("{run}/train.csv"),
            ],
            dir,
        );
        assert!(stdout.contains("wrote 20 rows"), "stdout: {stdout}");
    }
    // Identical flags must produce byte-identical data and parameter files.
    assert_eq!(read(dir, "a/train.csv"), read(dir, "b/train.csv"));
    assert_eq!(read(dir, "a/train.params.json"), read(dir, "b/train.params.json"));

    let csv = read(dir, "a/train.csv");
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 20, "header plus one row per signal");
    assert!(rows[0].starts_with("label,seed,s0,"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("S1,")).count(), 10);
    assert_eq!(csv.lines().filter(|l| l.starts_with("S2,")).count(), 10);
}

#[test]
fn unknown_class_is_a_usage_error() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let out = pqd(
        &["generate", "--classes", "S99", "--out", "x.csv"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2), "usage errors exit with 2");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("unknown class 'S99'"), "stderr: {stderr}");
    assert!(!tmp.path().join("x.csv").exists(), "no output on failure");
}

#[test]
fn decompose_names_every_level() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    pqd_ok(
        &["generate", "--classes", "S5", "--per-class", "1", "--seed", "3", "--out", "one.csv"],
        dir,
    );
    pqd_ok(
        &["decompose", "--input", "one.csv", "--row", "0", "--out", "levels.json"],
        dir,
    );
    let json: serde_json::Value =
        serde_json::from_str(&read(dir, "levels.json")).expect("valid JSON");
    let map = json.as_object().expect("object");
    assert_eq!(map.len(), 12, "eleven detail levels plus the approximation");
    for i in 1..=11 {
        assert!(map.contains_key(&format!("D{i}")), "missing D{i}");
    }
    assert!(map.contains_key("A11"));

    // Out-of-range rows are runtime errors (exit 1), not panics.
    let out = pqd(
        &["decompose", "--input", "one.csv", "--row", "5", "--out", "again.json"],
        dir,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn pipeline_learns_separable_classes_from_disk() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    pqd_ok(
        &[
            "generate", "--classes", "S1,S2,S5", "--per-class", "16", "--seed", "7",
            "--out", "train.csv", "--test-out", "test.csv",
        ],
        dir,
    );
    pqd_ok(&["extract", "--input", "train.csv", "--out", "ftrain.csv"], dir);
    pqd_ok(&["extract", "--input", "test.csv", "--out", "ftest.csv"], dir);
    let ftrain = read(dir, "ftrain.csv");
    assert!(ftrain.lines().any(|l| l.starts_with("label,f1,")), "feature header present");

    pqd_ok(
        &[
            "train", "--features", "ftrain.csv", "--hidden", "24", "--chunk", "12",
            "--seed", "7", "--out", "model.json",
        ],
        dir,
    );
    pqd_ok(
        &[
            "eval", "--model", "model.json", "--features", "ftest.csv",
            "--out", "eval.json", "--confusion-out", "confusion.csv",
        ],
        dir,
    );

    let eval: serde_json::Value = serde_json::from_str(&read(dir, "eval.json")).expect("JSON");
    let acc = eval["overall_accuracy"].as_f64().expect("accuracy");
    assert!(acc > 0.9, "separable three-class problem, got {acc}");
    assert_eq!(eval["n_samples"].as_u64(), Some(12), "quarter-size test split");

    let confusion = read(dir, "confusion.csv");
    assert!(confusion.starts_with("true_class,S1,S2,S5\n"));
    let total: u64 = confusion
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').skip(1).map(|v| v.parse::<u64>().expect("count")))
        .sum();
    assert_eq!(total, 12, "confusion counts cover every test sample");
}

#[test]
fn sweep_writes_one_row_per_hidden_count() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    pqd_ok(
        &[
            "sweep", "--preset", "11class", "--hidden", "20,40", "--seeds", "1",
            "--seed", "5", "--out", "sweep.csv",
        ],
        dir,
    );
    let csv = read(dir, "sweep.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "sl_no,hidden_count,test_accuracy_pct,train_time_s,ref_test_accuracy_pct,ref_train_time_s");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,20,"));
    assert!(lines[2].starts_with("2,40,"));
}

#[test]
fn compare_writes_one_row_per_activation() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    pqd_ok(
        &[
            "compare", "--preset", "11class", "--activations", "sigmoid,hardlim",
            "--hidden", "50", "--seeds", "1", "--seed", "5",
            "--out", "cmp.csv", "--report-out", "report.json",
        ],
        dir,
    );
    let csv = read(dir, "cmp.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("11class,sigmoid,50,"));
    assert!(lines[2].starts_with("11class,hardlim,50,"));

    let report: serde_json::Value = serde_json::from_str(&read(dir, "report.json")).expect("JSON");
    assert_eq!(report["reports"].as_array().map(Vec::len), Some(2), "one report per cell");
    assert_eq!(report["summaries"].as_array().map(Vec::len), Some(2));
}

#[test]
fn reproduce_table3_matches_published_sizing() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    pqd_ok(&["reproduce", "--table", "3", "--out", "r"], dir);
    assert_eq!(
        read(dir, "r/table3.csv"),
        "preset,n_classes,n_train,n_test\n\
         11class,11,3254,815\n\
         13class,13,3510,879\n\
         16class,16,4353,1090\n"
    );

    let out = pqd(&["reproduce", "--table", "9", "--out", "r"], dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown table"));
}
