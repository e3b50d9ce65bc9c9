//! End-to-end tests of the `shapovalov` binary: exit codes and output formats.

use std::process::{Command, Output};

fn shapovalov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapovalov")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn default_verify_passes() {
    let out = shapovalov(&["verify"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("overall: PASS"));
    // Profile plus three random specializations for each suite.
    assert_eq!(text.matches("defining-relations").count(), 4);
}

#[test]
fn verify_json_filters_suites_and_writes_rationals_as_strings() {
    let out = shapovalov(&[
        "verify",
        "--n",
        "3",
        "--depth",
        "2",
        "--trials",
        "1",
        "--suite",
        "row-commutativity",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "verify");
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    assert!(outcomes.iter().all(|o| o["suite"] == "row-commutativity" && o["passed"] == true));
    assert_eq!(outcomes[0]["q"], "2/1");
    assert_eq!(outcomes[0]["z"], serde_json::json!(["3/1", "5/1", "7/1"]));
}

#[test]
fn gram_csv_lists_entries() {
    let out = shapovalov(&["gram", "--n", "2", "--depth", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("content,row,column,value,norm"));
    assert!(text.contains("\"(1,1)\",\"(1,0|1)\",\"(1,0|1)\""));
}

#[test]
fn degenerate_inverse_fails_with_witness() {
    let out = shapovalov(&["inverse", "--q", "2", "--z", "3,1/4", "--depth", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "DegenerateWeight");
    assert_eq!(v["error"]["witness"], "(2,0|1)");
}

#[test]
fn generic_inverse_passes() {
    let out = shapovalov(&["inverse", "--n", "3", "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn singular_with_arranged_weight() {
    for arrange in ["positive", "negative"] {
        let out = shapovalov(&["singular", "2", "3", "--n", "3", "--arrange", arrange, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["criterion"], true);
        assert_eq!(v["singular"], true);
    }
    let out = shapovalov(&["singular", "1", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["singular"], false);
}

#[test]
fn flip_compare_shows_degeneration() {
    let out = shapovalov(&["flip-compare", "--z", "3,1/4", "--depth", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let block =
        v["blocks"].as_array().unwrap().iter().find(|b| b["content"] == serde_json::json!([2, 1])).unwrap().clone();
    assert_eq!(block["original_det"], "0/1");
    assert_eq!(block["flipped_independent"], true);
}

#[test]
fn seeded_parameters_are_reproducible() {
    let a = shapovalov(&["gram", "--seed", "9", "--depth", "2", "--format", "json"]);
    let b = shapovalov(&["gram", "--seed", "9", "--depth", "2", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_with_usage_status() {
    for args in [
        &["verify", "--suite", "unknown"][..],
        &["gram", "--q", "1"][..],
        &["gram", "--z", "3"][..],
        &["singular", "4", "1"][..],
    ] {
        let out = shapovalov(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_ne!(shapovalov(&["gram", "--q", "x/y"]).status.code(), Some(0));
}
