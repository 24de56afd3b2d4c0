use std::path::PathBuf;
use std::process::{Command, Output};

use polyana::io;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn polyana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyana"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn tensor_of_binary_with_itself_is_one_quaternary_op() {
    let out = polyana(&["tensor", &path("A.json"), &path("B.json")]);
    assert!(out.status.success());
    let doc: io::SignatureDoc = io::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc.ops.len(), 1);
    assert_eq!(doc.ops[0].ins.len(), 4);
    assert_eq!(doc.ops[0].name, "(m;m,m)");
}

#[test]
fn em_eval_of_trivial_binary_species_on_three_points() {
    let out = polyana(&["em-eval", &path("species_E.json"), &path("V3.json")]);
    assert!(out.status.success());
    let doc: io::SliceDoc = io::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(doc.elems.len(), 6);
}

#[test]
fn output_file_matches_standard_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("s.json");
    let printed = polyana(&["monad", "S", &path("A.json")]);
    let written = polyana(&[
        "monad",
        "S",
        &path("A.json"),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(written.status.success() && written.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), printed.stdout);
}

#[test]
fn comb_pushes_decorations_to_the_leaves() {
    let out = polyana(&["comb", &path("tree_twisted.json"), "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "m(_*,m(_*,_*)) [2, 1, 0]\n"
    );
}

#[test]
fn kleisli_twist_composed_with_itself_is_the_identity() {
    let out = polyana(&[
        "kleisli-compose",
        &path("kleisli_twist.json"),
        &path("kleisli_twist.json"),
    ]);
    assert!(out.status.success());
    let identity = std::fs::read(fixture("kleisli_identity.json")).unwrap();
    assert_eq!(out.stdout, identity);
}

#[test]
fn missing_or_malformed_input_exits_two() {
    let out = polyana(&["unit", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"colours\": [").unwrap();
    assert_eq!(
        polyana(&["unit", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn ill_typed_input_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"colours":["*"],"ops":[{"name":"m","out":"x","in":[]}]}"#,
    )
    .unwrap();
    assert_eq!(
        polyana(&["unit", bad.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn failing_laws_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let fake = dir.path().join("fake.json");
    std::fs::write(&fake, r#"{"colours":["*"],"elems":[]}"#).unwrap();
    std::fs::write(dir.path().join("junk.json"), r#"{"unrelated": true}"#).unwrap();
    let out = polyana(&[
        "check",
        "--suite",
        "frobenius",
        "--fixtures",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_round_trip_and_seed_is_printed() {
    let dir = fixture("");
    let out = polyana(&[
        "check",
        "--suite",
        "frobenius",
        "--fixtures",
        dir.to_str().unwrap(),
        "--format",
        "text",
        "--seed",
        "5",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.starts_with("seed: 5\nbound: 3\n"));
    assert!(text.contains("orbit_projection.json separates: weak pullback, not a pullback"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn unknown_suite_is_rejected() {
    assert_eq!(
        polyana(&["check", "--suite", "nope"]).status.code(),
        Some(2)
    );
}
