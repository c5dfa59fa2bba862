//! End-to-end checks of the installed binary: worked examples, JSON mode,
//! exit codes, and multi-command sessions.

use std::process::Command;

fn modspace(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_modspace"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn describe_semisimple_pair() {
    let (out, _, code) = modspace(&["describe", "KK"]);
    assert_eq!(code, 0);
    assert!(out.contains("dim 2"), "got: {out}");
    assert!(out.contains("semisimple: true"), "got: {out}");
    assert!(out.contains("points: 2"), "got: {out}");
}

#[test]
fn gabriel_product_is_ordered() {
    let (fwd, _, code) = modspace(&["subspace", "gabriel", "p", "q", "--algebra", "T2"]);
    assert_eq!(code, 0);
    assert!(fwd.contains("ideal basis: [e12]"), "got: {fwd}");
    let (rev, _, code) = modspace(&["subspace", "gabriel", "q", "p", "--algebra", "T2"]);
    assert_eq!(code, 0);
    assert!(rev.contains("ideal dim: 0"), "got: {rev}");
}

#[test]
fn session_rebuilds_extension() {
    let (out, _, code) = modspace(&[
        "--algebra",
        "T2",
        "localize",
        "complement",
        "q",
        ";",
        "localize",
        "extend-restrict",
        "O_p",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("dim 2"), "got: {out}");
    assert!(out.contains("iso: false"), "got: {out}");
    assert!(out.contains("splits as direct sum of factors: false"), "got: {out}");
}

#[test]
fn json_records_parse() {
    let (out, _, code) = modspace(&["--json", "describe", "KK"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).expect("valid JSON");
    assert_eq!(v["dim"], 2);
    assert_eq!(v["semisimple"], true);
}

#[test]
fn exit_codes() {
    let (_, _, ok) = modspace(&["--suite", "point-functor"]);
    assert_eq!(ok, 0);
    let (_, err, usage) = modspace(&["describe", "NOPE"]);
    assert_eq!(usage, 2, "unknown name is an input error: {err}");
    let (_, err, unknown) = modspace(&["frobnicate"]);
    assert_eq!(unknown, 2, "unknown command is a usage error: {err}");
    let (_, _, empty) = modspace(&[]);
    assert_eq!(empty, 2, "no command is a usage error");
}

#[test]
fn suite_json_is_deterministic_modulo_timing() {
    let run = || {
        let (out, _, code) = modspace(&["--json", "--suite", "point-functor", "--seed", "5"]);
        assert_eq!(code, 0);
        let mut v: serde_json::Value = serde_json::from_str(out.trim()).expect("valid JSON");
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn suite_listing_names_every_suite() {
    let (out, _, code) = modspace(&["--suite", "list"]);
    assert_eq!(code, 0);
    for name in [
        "bad-triangle",
        "gabriel-asymmetry",
        "torsion-sequence",
        "containment-equivalence",
        "open-lattice",
        "fbn-bijection",
        "point-functor",
        "graded",
        "open-question",
    ] {
        assert!(out.contains(name), "missing {name} in: {out}");
    }
}

#[test]
fn loads_algebra_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny.json");
    std::fs::write(
        &path,
        r#"{"field":{"Fp":3},"basis":["one"],"unit":["1"],"mul":[[0,0,[[0,"1"]]]]}"#,
    )
    .unwrap();
    let (out, _, code) = modspace(&["--algebra", path.to_str().unwrap(), "describe", "tiny"]);
    assert_eq!(code, 0, "got: {out}");
    assert!(out.contains("dim 1"), "got: {out}");
    assert!(out.contains("F3"), "got: {out}");
}
