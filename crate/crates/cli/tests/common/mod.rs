#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bisa-mech")
}

/// Runs the binary with `BISA_MECH_THREADS` set to `threads` (or unset).
pub fn run_with(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    cmd.env_remove("BISA_MECH_THREADS");
    if let Some(t) = threads {
        cmd.env("BISA_MECH_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

pub fn run(args: &[&str]) -> Output {
    run_with(args, None)
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert_eq!(
        code(&out),
        0,
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn csvs(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| s(&p))
        .collect();
    v.sort();
    v
}

/// Synthetic data → fits → report. Returns the report path.
pub fn pipeline(root: &Path, threads: Option<&str>) -> PathBuf {
    let step = |args: Vec<String>| {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run_with(&refs, threads);
        assert_eq!(
            code(&out),
            0,
            "{refs:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    let data = root.join("data");
    let fits = root.join("fits");
    let report = root.join("report.json");
    step(vec!["sweep".into(), "--out".into(), s(&root.join("sweep"))]);
    step(vec!["synth".into(), "--out".into(), s(&data)]);
    let mut slope = vec![
        "fit".into(),
        "--kind".into(),
        "slope".into(),
        "--out".into(),
        s(&fits),
    ];
    slope.extend(csvs(&data.join("slope")));
    step(slope);
    for (kind, file) in [
        ("bls", "lateral_points.csv"),
        ("chambers", "chamber_points.csv"),
        ("angle-pressure", "angle_pressure.csv"),
    ] {
        step(vec![
            "fit".into(),
            "--kind".into(),
            kind.into(),
            "--out".into(),
            s(&fits),
            s(&data.join(file)),
        ]);
    }
    step(vec![
        "report".into(),
        "--data-dir".into(),
        s(&fits),
        "--out".into(),
        s(&report),
    ]);
    report
}

/// Schema validation errors of a report, empty when valid.
pub fn schema_errors(report: &serde_json::Value) -> Vec<String> {
    let schema: serde_json::Value = serde_json::from_str(bisa_mech_cli::REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    validator
        .iter_errors(report)
        .map(|e| e.to_string())
        .collect()
}
