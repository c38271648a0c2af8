//! End-to-end tests of the `sensan` binary: flag surface, output formats,
//! exit codes, and simulate's file outputs.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sensan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sensan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = sensan(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout_text(args: &[&str]) -> String {
    let out = sensan(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn exit_code(args: &[&str]) -> i32 {
    sensan(args).status.code().expect("exit code")
}

#[test]
fn solve_reference_cases() {
    let v = stdout_json(&["solve", "--test", "t2", "--es", "d=0.5", "--sig", "0.05", "--tails", "1"]);
    assert_eq!(v["result"]["n_min"], 48);
    assert!((v["result"]["achieved_mes"]["value"].as_f64().unwrap() - 0.4950).abs() < 5e-5);

    let v = stdout_json(&["solve", "--test", "chi2", "--df", "1", "--es", "w=0.3"]);
    assert_eq!(v["result"]["n_min"], 43);

    let v = stdout_json(&["solve", "--test", "anova", "--groups", "6", "--es", "f=0.25"]);
    assert_eq!(v["result"]["n_min"], 188);

    let v = stdout_json(&["solve", "--test", "r", "--es", "r=0.1"]);
    assert_eq!(v["result"]["n_min"], 272);

    // defaults are echoed in the output
    let v = stdout_json(&["solve", "--test", "t2", "--es", "d=0.8"]);
    assert_eq!(v["spec"]["sig"], 0.05);
    assert_eq!(v["spec"]["tails"], "one");
}

#[test]
fn mes_reference_cases() {
    let v = stdout_json(&["mes", "--test", "t2", "--n", "30", "--sig", "0.05", "--tails", "1"]);
    assert!((v["result"]["mes"]["value"].as_f64().unwrap() - 0.64).abs() < 5e-3);

    let v = stdout_json(&["mes", "--test", "t2", "--n", "164", "--sig", "0.01"]);
    assert!((v["result"]["mes"]["value"].as_f64().unwrap() - 0.37).abs() < 5e-3);

    let v = stdout_json(&["mes", "--test", "t2", "--n", "48"]);
    assert!((v["result"]["mes"]["value"].as_f64().unwrap() - 0.4950).abs() < 5e-5);
}

#[test]
fn posthoc_reference_cases() {
    let v = stdout_json(&["posthoc", "--n-actual", "30", "--n-min", "48"]);
    assert_eq!(v["sensitiveness_pct"], -37.5);
    let v = stdout_json(&["posthoc", "--n-actual", "102", "--n-min", "48"]);
    assert_eq!(v["sensitiveness_pct"], 112.5);
    let v = stdout_json(&["posthoc", "--n-actual", "48", "--n-min", "48"]);
    assert_eq!(v["sensitiveness_pct"], 0.0);
}

#[test]
fn power_both_directions() {
    let v = stdout_json(&["power", "--test", "t2", "--es", "d=0.5", "--alpha", "0.05", "--power", "0.8"]);
    assert_eq!(v["n"], 102);

    let v = stdout_json(&["power", "--test", "t2", "--es", "d=0.5", "--n", "48"]);
    assert!((v["power"].as_f64().unwrap() - 0.52).abs() < 0.01);

    let v = stdout_json(&["power", "--test", "chi2", "--df", "1", "--es", "w=0.3", "--n", "43"]);
    assert!((v["power"].as_f64().unwrap() - 0.50).abs() < 0.01);
}

#[test]
fn table_row_counts_and_format_invariance() {
    let t2: Vec<Value> =
        serde_json::from_value(stdout_json(&["table", "--which", "table2"])).unwrap();
    assert_eq!(t2.len(), 36);
    let supp: Vec<Value> =
        serde_json::from_value(stdout_json(&["table", "--which", "supp2"])).unwrap();
    assert_eq!(supp.len(), 36);

    // the csv rendering carries the same values as the json one
    let csv_text = stdout_text(&["table", "--which", "table2", "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let csv_rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(csv_rows.len(), 36);
    for (json_row, csv_row) in t2.iter().zip(&csv_rows) {
        assert_eq!(json_row["test_label"].as_str().unwrap(), &csv_row[0]);
        assert_eq!(json_row["n_sns"].to_string(), csv_row[4]);
        assert_eq!(json_row["n_pwr"].to_string(), csv_row[5]);
        let target: f64 = csv_row[3].parse().unwrap();
        assert!((json_row["target_es"]["value"].as_f64().unwrap() - target).abs() < 5e-5);
    }
}

#[test]
fn json_output_round_trips() {
    let text = stdout_text(&["solve", "--test", "t2", "--es", "d=0.5"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    // the result block parses into the library's own type and back
    let result: sensan::SensitivenessResult =
        serde_json::from_value(v["result"].clone()).unwrap();
    let back = serde_json::to_value(result).unwrap();
    assert_eq!(v["result"], back);
    // a second invocation is byte-identical
    assert_eq!(text, stdout_text(&["solve", "--test", "t2", "--es", "d=0.5"]));
}

#[test]
fn usage_errors_exit_2() {
    // unknown flag (clap)
    assert_eq!(exit_code(&["solve", "--nope"]), 2);
    // missing required context
    assert_eq!(exit_code(&["solve", "--test", "chi2", "--es", "w=0.3"]), 2);
    assert_eq!(exit_code(&["solve", "--test", "anova", "--es", "f=0.2"]), 2);
    // malformed effect size
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "0.5"]), 2);
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "q=0.5"]), 2);
    // incompatible metric
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "w=0.5"]), 2);
    // out-of-range significance
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "d=0.5", "--sig", "0.7"]), 2);
    // bad tails
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "d=0.5", "--tails", "3"]), 2);
    // df floor
    assert_eq!(exit_code(&["mes", "--test", "t2", "--n", "2"]), 2);
    // --df on a family that does not take it
    assert_eq!(exit_code(&["solve", "--test", "t2", "--df", "3", "--es", "d=0.5"]), 2);
    // simulate without a source
    assert_eq!(exit_code(&["simulate"]), 2);
    // precision out of range
    assert_eq!(exit_code(&["solve", "--test", "t2", "--es", "d=0.5", "--precision", "13"]), 2);
}

#[test]
fn degenerate_analysis_exits_3() {
    // equal-mean populations plus an unreachable capture threshold: zero
    // captures everywhere, so the share analysis is degenerate
    let dir = tempfile::tempdir().unwrap();
    let mut config = sensan::SimulationConfig::desk_scale(3);
    for m in &mut config.macro_pops {
        m.mean2 = m.mean1;
    }
    config.mes_threshold = 50.0;
    config.pops_per_study = 5;
    let path = dir.path().join("null.json");
    std::fs::write(&path, serde_json::to_string(&config).unwrap()).unwrap();
    let out = sensan(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(msg.contains("degenerate"), "stderr: {msg}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = sensan(&[
        "solve", "--test", "t2", "--es", "d=0.5", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["n_min"], 48);
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort();
    entries
}

#[test]
fn simulate_is_deterministic_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (dir_a, dir_b, dir_c) = (
        dir.path().join("a"),
        dir.path().join("b"),
        dir.path().join("c"),
    );
    let run = |out_dir: &Path, seed: &str| {
        let out = sensan(&[
            "simulate", "--preset", "desk", "--seed", seed, "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "simulate failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let stdout_a = run(&dir_a, "11");
    let stdout_b = run(&dir_b, "11");
    let stdout_c = run(&dir_c, "12");

    assert_eq!(stdout_a, stdout_b, "same seed, same stdout");
    let files_a = read_dir_sorted(&dir_a);
    let files_b = read_dir_sorted(&dir_b);
    assert_eq!(files_a, files_b, "same seed, byte-identical files");
    assert_ne!(stdout_a, stdout_c, "different seed, different result");

    let names: Vec<&str> = files_a.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        vec![
            "capture_summary.csv",
            "comparisons.csv",
            "comparisons_by_study.csv",
            "outcomes.json",
            "studies.csv"
        ]
    );

    // outcomes parse back into the library type
    let outcomes: Vec<sensan::StudyOutcome> =
        serde_json::from_slice(&files_a.iter().find(|(n, _)| n == "outcomes.json").unwrap().1)
            .unwrap();
    assert_eq!(outcomes.len(), 2);
    for o in &outcomes {
        assert_eq!(o.populations.len(), 43);
    }
}

#[test]
fn simulate_accepts_json_and_toml_configs() {
    let dir = tempfile::tempdir().unwrap();
    let config = sensan::SimulationConfig::desk_scale(11);

    let json_path = dir.path().join("config.json");
    std::fs::write(&json_path, serde_json::to_string(&config).unwrap()).unwrap();
    let from_json = stdout_text(&["simulate", "--config", json_path.to_str().unwrap()]);

    // seed override matches an explicitly seeded preset run
    let from_preset = stdout_text(&["simulate", "--preset", "desk", "--seed", "11"]);
    assert_eq!(from_json, from_preset);

    let toml_path = dir.path().join("config.toml");
    let toml_text = toml_basic(&config);
    std::fs::write(&toml_path, toml_text).unwrap();
    let from_toml = stdout_text(&["simulate", "--config", toml_path.to_str().unwrap()]);
    assert_eq!(from_toml, from_json);

    // unknown extension is a usage error
    let other = dir.path().join("config.yaml");
    std::fs::write(&other, "x").unwrap();
    assert_eq!(exit_code(&["simulate", "--config", other.to_str().unwrap()]), 2);
}

/// Hand-rolled TOML mirror of a desk-scale config (keeps the test free of
/// a TOML-serializer dependency).
fn toml_basic(config: &sensan::SimulationConfig) -> String {
    let mut s = String::new();
    s.push_str(&format!("seed = {}\n", config.seed));
    s.push_str(&format!("n_studies = {}\n", config.n_studies));
    s.push_str(&format!("pops_per_study = {}\n", config.pops_per_study));
    s.push_str(&format!("sig = {:?}\n", config.sig));
    s.push_str(&format!("mes_threshold = {:?}\n", config.mes_threshold));
    s.push_str("tails = \"one\"\n");
    for m in &config.macro_pops {
        s.push_str("\n[[macro_pops]]\n");
        s.push_str(&format!("group_size = {}\n", m.group_size));
        s.push_str(&format!("mean1 = {:?}\n", m.mean1));
        s.push_str(&format!("mean2 = {:?}\n", m.mean2));
        s.push_str(&format!("sd = {:?}\n", m.sd));
    }
    for e in &config.extraction_plan {
        s.push_str("\n[[extraction_plan]]\n");
        s.push_str(&format!("macro_index = {}\n", e.macro_index));
        s.push_str(&format!("population_size = {}\n", e.population_size));
    }
    s.push_str("\n[condition_ns]\n");
    for (name, n) in &config.condition_ns {
        s.push_str(&format!("{name} = {n}\n"));
    }
    s
}
