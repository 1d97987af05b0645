//! End-to-end tests against the built binary: exit codes, report shapes,
//! and the bit-exact document round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasefan"))
}

fn run(args: &[&str]) -> (Output, Value) {
    let output = binary().args(args).output().expect("binary runs");
    let stdout = String::from_utf8(output.stdout.clone()).expect("utf8 output");
    let value = serde_json::from_str(&stdout).expect("reports are JSON");
    (output, value)
}

fn fixture_file(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    let (output, doc) = run(&["fixtures", name]);
    assert!(output.status.success());
    let path = dir.path().join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

#[test]
fn fixtures_list_has_at_least_six_entries() {
    let (output, report) = run(&["fixtures", "--list"]);
    assert!(output.status.success());
    assert!(report["fixtures"].as_array().unwrap().len() >= 6);
}

#[test]
fn unknown_fixture_is_an_input_error() {
    let output = binary().args(["fixtures", "nope"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_phase_on_the_k4_fixture_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "k4-phase");
    let (output, report) = run(&["verify-phase", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["ok"], Value::Bool(true));
    assert_eq!(report["checkers_agree"], Value::Bool(true));
    assert!(!report["necklace_orderings"].as_array().unwrap().is_empty());
}

#[test]
fn search_phase_on_fano_refutes_with_count_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "fano");
    let (output, report) = run(&["search-phase", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(report["count"], Value::from(0));
}

#[test]
fn count_orientations_on_fano_refutes() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "fano");
    let (output, report) = run(&["count-orientations", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(report["count"], Value::from(0));
}

#[test]
fn search_phase_counts_u24() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u24");
    let (output, report) = run(&[
        "search-phase",
        path.to_str().unwrap(),
        "--mode",
        "projective",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["count"], Value::from(24));
    let (_, limited) = run(&["search-phase", path.to_str().unwrap(), "--limit", "5"]);
    assert_eq!(limited["count"], Value::from(5));
    assert_eq!(limited["truncated"], Value::Bool(true));
}

#[test]
fn to_circuits_matches_the_matrix_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u34-phase");
    let (output, report) = run(&["to-circuits", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    // Oracle: the signed circuits of the reoriented matrix realization,
    // computed through the library.
    let e = phasefan::fixtures::u34_phase_avoiding_zero();
    let oracle = phasefan::bridge::phase_to_oriented(&e).unwrap();
    let expected = phasefan::doc::om_to_signed_circuits_value(&oracle);
    assert_eq!(report, expected);
}

#[test]
fn from_oriented_then_to_circuits_reproduces_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let oriented = fixture_file(&dir, "k4-oriented");
    let (output, phase_doc) = run(&["from-oriented", oriented.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let phase_path = dir.path().join("k4-from-oriented.json");
    std::fs::write(
        &phase_path,
        serde_json::to_string_pretty(&phase_doc).unwrap(),
    )
    .unwrap();
    let (output, circuits) = run(&["to-circuits", phase_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let original: Value =
        serde_json::from_str(&std::fs::read_to_string(&oriented).unwrap()).unwrap();
    assert_eq!(circuits, original, "round trip is bit-exact");
}

#[test]
fn to_oriented_emits_a_valid_covector_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u24-phase");
    let (output, om_doc) = run(&["to-oriented", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let om_path = dir.path().join("u24-om.json");
    std::fs::write(&om_path, serde_json::to_string_pretty(&om_doc).unwrap()).unwrap();
    let (output, report) = run(&["verify-om", om_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["topes"], Value::from(8));
}

#[test]
fn minor_command_emits_a_verifying_structure() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "k4-phase");
    let (output, minor_doc) = run(&[
        "minor",
        path.to_str().unwrap(),
        "--delete",
        "e34",
        "--contract",
        "e12",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let minor_path = dir.path().join("k4-minor.json");
    std::fs::write(
        &minor_path,
        serde_json::to_string_pretty(&minor_doc).unwrap(),
    )
    .unwrap();
    let (output, report) = run(&["verify-phase", minor_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["ok"], Value::Bool(true));
}

#[test]
fn subfan_check_is_reflexive_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u34-phase");
    let (output, report) = run(&[
        "subfan-check",
        path.to_str().unwrap(),
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["subfan"], Value::Bool(true));
}

#[test]
fn necklace_orderings_reports_per_face() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u24-phase");
    let (output, report) = run(&["necklace-orderings", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let faces = report["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 1);
    assert_eq!(faces[0]["ordering"].as_array().unwrap().len(), 4);
}

#[test]
fn search_phase_contracts_loops_first() {
    // A rank-1 matroid with a loop: the fan is the fan of the loopfree
    // contraction, which carries exactly one structure.
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "elements": ["1", "2"],
        "by": "rank_table",
        "data": [0, 1, 0, 1],
    });
    let path = dir.path().join("loopy.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let (output, report) = run(&["search-phase", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(report["count"], Value::from(1));
}

#[test]
fn verify_om_refutes_a_broken_tope_set() {
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "elements": ["1", "2", "3", "4"],
        "by": "topes",
        // One tope removed from a valid set: the axioms must fail.
        "data": ["++++", "++-+", "-+-+", "-+--", "----", "--+-", "+-++"],
    });
    let path = dir.path().join("broken.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let (output, report) = run(&["verify-om", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(report["ok"], Value::Bool(false));
}

#[test]
fn schema_violations_exit_with_code_two_and_a_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "elements": ["1", "2"],
        "by": "bases",
        "data": [["1", "9"]],
    });
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let output = binary()
        .args(["search-phase", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["pointer"], Value::from("/data/0/1"));

    let output = binary()
        .args(["verify-phase", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn invalid_phase_structure_is_refuted_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture_file(&dir, "u34-phase");
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // Translate one facet's basepoint off the even cover. Coordinate 3 is
    // outside the facet tangent of the first u34-phase facet, so the flip
    // genuinely moves the coset.
    let space = &mut doc["facets"][0]["space"];
    let base = space["basepoint"].as_str().unwrap().to_string();
    let flipped: String = base
        .chars()
        .enumerate()
        .map(|(i, c)| {
            if i == 3 {
                if c == '0' {
                    '1'
                } else {
                    '0'
                }
            } else {
                c
            }
        })
        .collect();
    space["basepoint"] = Value::from(flipped);
    let bad_path = dir.path().join("bad-phase.json");
    std::fs::write(&bad_path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let (output, report) = run(&["verify-phase", bad_path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(report["ok"], Value::Bool(false));
    assert!(!report["violations"].as_array().unwrap().is_empty());
    assert_eq!(report["checkers_agree"], Value::Bool(true));
}
