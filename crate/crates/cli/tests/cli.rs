//! End-to-end tests of the binary: command surface, exit codes, and the
//! canonical JSON round-trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn describe_line_bundle() {
    let out = run(&["describe", "--variety", "P2", "--bundle", "O(3)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 1"), "{text}");
    assert!(text.contains("1 + 3h"), "{text}");
    assert!(text.contains("(10, 0, 0)"), "{text}");
}

#[test]
fn describe_syzygy_bundle() {
    let out = run(&["describe", "--variety", "P2", "--bundle", "syz(O(3),3)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 2"), "{text}");
    assert!(text.contains("1 - 3h + 9h^2"), "{text}");
    assert!(text.contains("(0, 7, 0)"), "{text}");
}

#[test]
fn describe_dual_on_p3() {
    let out = run(&["describe", "--variety", "P3", "--bundle", "dual(syz(O(1),4))"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank: 3"), "{text}");
    assert!(text.contains("1 + h + h^2 + h^3"), "{text}");
}

#[test]
fn syzygy_command_verdicts() {
    let out = run(&["syzygy", "--variety", "P2", "--bundle", "O(3)", "-w", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("LocallyClosedEmbedding"), "{text}");
    assert!(text.contains("simple: yes [theorem]"), "{text}");

    let out = run(&["syzygy", "--variety", "P3", "--bundle", "O(1)", "-w", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("OpenEmbedding"));
}

#[test]
fn moduli_command_numbers() {
    let out = run(&[
        "moduli", "--variety", "P2", "--bundle", "O(3)", "-w", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["dim_g0_fiber"]["exact"], 21);
    assert_eq!(v["report"]["tangent_spl_s"]["exact"], 24);
    assert_eq!(v["report"]["obstruction_spl_s"]["exact"], 0);
    assert_eq!(v["report"]["codim_syz"]["exact"], 3);
    assert_eq!(v["embedding"], "LocallyClosedEmbedding");
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [
        vec!["describe", "--variety", "P2", "--bundle", "syz(O(3),3)", "--format", "json"],
        vec!["syzygy", "--variety", "P3", "--bundle", "O(1)", "-w", "4", "--format", "json"],
        vec!["moduli", "--variety", "P2", "--bundle", "O(3)", "-w", "3", "--format", "json"],
        vec!["tower", "--variety", "P3", "--start", "O(1)", "--steps", "2", "--format", "json"],
        vec!["verify-paper", "--format", "json"],
    ] {
        let out = run(&args);
        let text = stdout(&out);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = format!("{}\n", serde_json::to_string_pretty(&v).unwrap());
        assert_eq!(text, again, "round trip for {args:?}");
    }
}

#[test]
fn tower_trace() {
    let out = run(&[
        "tower", "--variety", "P3", "--start", "O(1)", "--policy", "full", "--steps", "2",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let steps = v["run"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["chosen_w"], 4);
    assert_eq!(steps[0]["s_rank"], 3);
    assert_eq!(steps[1]["twist_applied"], 1);
    assert_eq!(steps[1]["v"], 6);
    assert!(v["run"]["halt"].is_null());
}

#[test]
fn tower_halt_on_surface_with_require_v() {
    let out = run(&[
        "tower", "--variety", "P2", "--start", "O(3)", "--policy", "3", "--steps", "1",
        "--require-v", "--scan-cap", "8",
    ]);
    assert!(out.status.success(), "definite negative is a successful run");
    let text = stdout(&out);
    assert!(text.contains("halted at step 1"), "{text}");
    assert!(text.contains("surface"), "{text}");
}

#[test]
fn exp2_via_input_file() {
    let input = fixture("exp2.json");
    let out = run(&[
        "syzygy", "--variety", "P2", "--bundle", "opaque(F)", "-w", "4",
        "--input", input.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["membership"]["in_u"], "fails");
    assert_eq!(v["embedding"], "NotApplicable");
    assert_eq!(v["s"]["split_line_degrees"], serde_json::json!([-2, -2]));
    assert_eq!(v["s"]["simple"]["value"], false);
}

#[test]
fn cy_quintic_via_input_file() {
    let input = fixture("cy_quintic.json");
    let out = run(&[
        "moduli", "--bundle", "opaque(L)", "-w", "5",
        "--input", input.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["dim_syz"]["exact"], 600);
    assert_eq!(v["embedding"], "OpenEmbedding");
}

#[test]
fn exit_codes() {
    // 1: parse error in the expression grammar.
    let out = run(&["describe", "--variety", "P2", "--bundle", "frob(1)"]);
    assert_eq!(out.status.code(), Some(1));
    // 1: unknown variety.
    let out = run(&["describe", "--variety", "P9", "--bundle", "O(1)"]);
    assert_eq!(out.status.code(), Some(1));
    // 1: precondition (w below n + r).
    let out = run(&["syzygy", "--variety", "P2", "--bundle", "O(3)", "-w", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // 2: verdict blocked on an opaque bundle without the deciding facts.
    let input = fixture("opaque_unknown.json");
    let out = run(&[
        "syzygy", "--variety", "P2", "--bundle", "opaque(E)", "-w", "4",
        "--input", input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    // 3: contradictory tables.
    let input = fixture("contradictory.json");
    let out = run(&[
        "describe", "--variety", "P2", "--bundle", "opaque(F)",
        "--input", input.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_paper_is_green() {
    let out = run(&["verify-paper"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("OK: 22 of 22 checks pass"), "{text}");
    assert!(!text.contains("FAIL "), "{text}");
}
