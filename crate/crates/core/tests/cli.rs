use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn subdens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdens")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn moments_prints_exact_intersection_moments() {
    let out = stdout(&subdens(&["moments", "--n", "100", "--ka", "10", "--kb", "20"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let m = &v["intersection_uniform"];
    assert!((m["mean"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    // hypergeometric variance 10·(20/100)(80/100)(90/99)
    let var = 10.0 * 0.2 * 0.8 * 90.0 / 99.0;
    assert!((m["variance"].as_f64().unwrap() - var).abs() < 1e-12);
}

#[test]
fn word_counts_match_closed_form_at_length_two() {
    let v: Value = serde_json::from_str(&stdout(&subdens(&["words", "count", "--m", "3", "--ell", "2"]))).unwrap();
    // at length 2 free and cyclic reduction coincide: 6·5 words
    assert_eq!(v["rows"][1]["exact"], "30");
    assert_eq!(v["rows"][1]["ball"], "36");
    assert_eq!(v["sandwich_holds"], true);
}

#[test]
fn enumerate_lists_every_word_once() {
    let out = stdout(&subdens(&["words", "enumerate", "--m", "2", "--ell", "3"]));
    let words: Vec<&str> = out.lines().collect();
    assert_eq!(words.len(), 28);
    let mut sorted = words.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 28);
}

#[test]
fn group_check_reads_presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "# two relators sharing ab\nrank 2\nabab\nabAB\n").unwrap();
    let out = stdout(&subdens(&["group", "check", "--presentation", path.to_str().unwrap(), "--lambda", "0.3"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["relators"], 2);
    assert_eq!(v["classical"]["holds"], false);
    assert_eq!(v["pieces"]["per_relator"][0]["length"], 4);
}

#[test]
fn malformed_presentation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "rank 2\nab\naA\n").unwrap();
    let o = subdens(&["group", "check", "--presentation", path.to_str().unwrap(), "--lambda", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn missing_config_field_exits_with_two() {
    let o = subdens(&["intersect-sim", "--n", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    let o = subdens(&["bernoulli-empty", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"kind": "intersection", "n": [1000], "alpha": [0.7], "beta": [0.7], "trials": 10}"#).unwrap();
    let csv = dir.path().join("out.csv");
    let args = ["intersect-sim", "--config", cfg.to_str().unwrap(), "--trials", "25", "--out", csv.to_str().unwrap()];
    stdout(&subdens(&args));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,m,n_or_ell,alpha,beta_or_d,lambda,k,trials,successes,p_hat,wilson_lo,wilson_hi,verdict"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "intersection");
    assert_eq!(row[7], "25");
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["trials"], 25);
    assert_eq!(summary["cells"].as_array().unwrap().len(), 1);
}

#[test]
fn same_seed_gives_identical_output() {
    let args =
        ["group", "sweep", "--m", "2", "--ell", "10", "--d", "0.2", "--lambda", "0.4", "--trials", "12", "--seed", "9"];
    assert_eq!(stdout(&subdens(&args)), stdout(&subdens(&args)));
}

#[test]
fn thresholds_cover_requested_ranks() {
    let v: Value = serde_json::from_str(&stdout(&subdens(&["thresholds", "--m", "2,5"]))).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["m"], 5);
}
