use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use tempfile::TempDir;

use projsep::constructions::gen_random_all_labels;
use projsep::io::{load_dataset, load_report, parse_dataset, parse_report, to_json, DatasetFile, DatasetMeta};
use projsep::LabeledPointSet;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_projsep"))
}

fn run(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = bin().current_dir(dir).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let (code, stdout, stderr) = run(dir, args);
    assert_eq!(code, 0, "{args:?} failed: {stderr}");
    stdout
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dataset_round_trips(seed in any::<u64>(), k in 1usize..4, extra in 0usize..3) {
        let d = k + extra;
        let (data, planes) = gen_random_all_labels(2 << k, d, k, 0.05, seed).unwrap();
        let meta = DatasetMeta { generator: Some("random".into()), seed: Some(seed), ..DatasetMeta::default() };
        let file = DatasetFile::new(&data, Some(planes.clone()), Some(meta.clone()));
        let loaded = parse_dataset(&to_json(&file).unwrap()).unwrap();
        prop_assert_eq!(loaded.data, data);
        prop_assert_eq!(loaded.planes, Some(planes));
        prop_assert_eq!(loaded.metadata, meta);
    }
}

#[test]
fn malformed_datasets_are_rejected_with_a_location() {
    let err = parse_dataset("{\"version\": 1, \"dimension\": 2,\n \"points\": [[0, 0], [1]]").unwrap_err();
    assert!(err.to_string().contains("line"), "{err}");
    let bad_label = r#"{"version": 1, "dimension": 1, "points": [[0], [1]], "labels": [[1, 0]]}"#;
    assert!(parse_dataset(bad_label).is_err());
    let bad_dim = r#"{"version": 1, "dimension": 2, "points": [[0, 0], [1]], "labels": [[1, -1]]}"#;
    assert!(parse_dataset(bad_dim).is_err());
    let unknown = r#"{"version": 1, "dimension": 1, "points": [[0]], "labels": [[1]], "extra": 3}"#;
    assert!(parse_dataset(unknown).is_err());
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "random", "--n", "24", "--d", "4", "--k", "3", "--seed", "5", "--out", "data.json"]);
    ok(d, &["construct", "--in", "data.json", "--out", "proj.json", "--report", "construct.json"]);
    let data = load_dataset(&d.join("data.json")).unwrap().data;
    let report = load_report(&d.join("construct.json")).unwrap();
    assert_eq!(report.r, 1);
    assert!(report.max_residual <= 1e-8);
    report.validate(&data, 1e-7).unwrap();
    let p1 = &report.properties[0];
    assert!(!p1.strictly_separable);
    assert!(report.properties[1..].iter().all(|p| p.strictly_separable));

    ok(d, &["verify", "--in", "data.json", "--report", "construct.json", "--out", "verify.json"]);
    ok(d, &["verify", "--in", "data.json", "--projection", "proj.json"]);
    let fresh = load_report(&d.join("verify.json")).unwrap();
    fresh.validate(&data, 1e-7).unwrap();
    assert_eq!(fresh.basis, report.basis);
}

#[test]
fn tampered_report_fails_verification() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "random", "--n", "12", "--d", "3", "--k", "2", "--seed", "9", "--out", "data.json"]);
    ok(d, &["construct", "--in", "data.json", "--report", "r.json"]);
    let mut report = load_report(&d.join("r.json")).unwrap();
    report.properties[0].strictly_separable = true;
    std::fs::write(d.join("bad.json"), to_json(&report).unwrap()).unwrap();
    let (code, _, _) = run(d, &["verify", "--in", "data.json", "--report", "bad.json"]);
    assert_eq!(code, 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "random", "--n", "16", "--d", "4", "--k", "2", "--seed", "3", "--out", "a.json"]);
    ok(d, &["generate", "--kind", "random", "--n", "16", "--d", "4", "--k", "2", "--seed", "3", "--out", "b.json"]);
    let read = |name: &str| std::fs::read_to_string(d.join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    for name in ["x.json", "y.json"] {
        ok(d, &["construct", "--in", "a.json", "--perturb", "--report", name]);
    }
    assert_eq!(read("x.json"), read("y.json"));
    let first = ok(d, &["optimize", "--in", "a.json", "--starts", "4", "--seed", "2", "--lambda", "0.2"]);
    let second = ok(d, &["optimize", "--in", "a.json", "--starts", "4", "--seed", "2", "--lambda", "0.2"]);
    assert_eq!(first, second);
}

#[test]
fn overlap_grid_has_one_row_per_tick_plus_header() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "cube", "--out", "cube.json"]);
    ok(d, &["overlap", "--in", "cube.json", "--grid", "101", "--lambda", "10", "--out", "grid.csv"]);
    let csv = std::fs::read_to_string(d.join("grid.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 102);
    assert!(rows.iter().all(|r| r.split(',').count() == 102));
    assert!(rows[0].starts_with("y\\x,-0.5,"));
}

#[test]
fn separate_report_has_an_empty_basis() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let data = LabeledPointSet::new(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 2.0]],
        vec![vec![-1, -1, 1, 1]],
    )
    .unwrap();
    std::fs::write(d.join("sq.json"), to_json(&DatasetFile::new(&data, None, None)).unwrap()).unwrap();
    ok(d, &["separate", "--in", "sq.json", "--strict", "--report", "sep.json"]);
    let report = parse_report(&std::fs::read_to_string(d.join("sep.json")).unwrap()).unwrap();
    assert_eq!(report.r, 0);
    assert!(report.basis.is_empty());
    assert!(report.properties[0].strictly_separable);
    assert!((report.properties[0].margin - 1.0).abs() < 1e-8);
    report.validate(&data, 1e-9).unwrap();
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["frobnicate"]).0, 2);
    assert_eq!(run(d, &["separate"]).0, 2);
    assert_eq!(run(d, &["separate", "--in", "missing.json"]).0, 1);
    ok(d, &["generate", "--kind", "circle", "--n", "5", "--out", "c.json"]);
    assert_eq!(run(d, &["separate", "--in", "c.json", "--property", "7"]).0, 2);
    assert_eq!(run(d, &["overlap", "--in", "c.json", "--lambda", "-1", "--w", "1,0"]).0, 2);
}
