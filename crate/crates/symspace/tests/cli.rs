use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use symspace::cli::run;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn symspace(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("symspace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn report(r: &Run) -> Value {
    serde_json::from_str(&r.stdout)
        .unwrap_or_else(|e| panic!("not a JSON report ({e}): {}", r.stdout))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

fn emit(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let r = symspace(&["corpus", "emit", name, "--output", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dihedral3_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "dihedral-3");
    let r = symspace(&["check", p(&f)]);
    assert_eq!(r.code, 0);
    let rep = report(&r);
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["version"], 1);
    assert!(rep["input_digest"].as_str().unwrap().starts_with("sha256:"));
    for name in ["idempotence", "left_invertibility", "self_distributivity"] {
        assert_eq!(check(&rep, name)["status"], "pass");
    }
}

#[test]
fn curvature_rep_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "curvature-adjoint-rep");
    let r = symspace(&["equiv", p(&f)]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let rep = report(&r);
    for name in [
        "round_trip.rep",
        "round_trip.extension",
        "round_trip.ism_rep",
        "equivalence",
        "group_object.alpha",
    ] {
        assert_eq!(check(&rep, name)["status"], "pass", "{name}");
    }
}

#[test]
fn mutated_module_fails_with_a_triple() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "r3-gf3-alexander");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    v["tau"]["1,2"] = json!([[0]]);
    let bad = dir.path().join("mutated-module.json");
    fs::write(&bad, v.to_string()).unwrap();

    let r = symspace(&["check", p(&bad)]);
    assert_eq!(r.code, 1);
    let rep = report(&r);
    assert_eq!(rep["status"], "fail");
    let failing: Vec<&Value> = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c["witness"].is_object()));
    assert!(failing.iter().any(|c| c["witness"]["z"].is_u64()));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(symspace(&["frobnicate"]).code, 2);
    assert_eq!(symspace(&["check"]).code, 2);
    assert_eq!(symspace(&["check", "/nonexistent/file.json"]).code, 2);
    assert_eq!(symspace(&["corpus", "emit", "no-such-entry"]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.json");
    fs::write(
        &garbled,
        r#"{"kind": "quandle", "size": 2, "table": [[0, 1], [1]]}"#,
    )
    .unwrap();
    let r = symspace(&["check", p(&garbled)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("$.table[1]"), "{}", r.stderr);

    let q = emit(dir.path(), "dihedral-3");
    assert_eq!(symspace(&["reduce", p(&q)]).code, 2);
    assert_eq!(symspace(&["--help"]).code, 0);
}

fn without_timing(r: &Run) -> Value {
    let mut v = report(r);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "sl2-gf5-alexander-prime");
    let big = dir.path().join("ext.json");
    let args = [
        "--seed",
        "7",
        "extend",
        p(&f),
        "--materialize",
        "--output",
        p(&big),
    ];
    let a = symspace(&args);
    let b = symspace(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(without_timing(&a), without_timing(&b));
    let ra = report(&a);
    assert_eq!(ra["data"]["extension_size"], 750);
    assert_eq!(
        check(&ra, "extension.self_distributivity")["exhaustive"],
        false
    );

    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("\"timing_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn strict_turns_skips_into_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "dihedral-5");
    let r = symspace(&["groups", p(&f), "--cap", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(check(&report(&r), "inn_closure")["status"], "skipped");
    assert_eq!(
        symspace(&["groups", p(&f), "--cap", "3", "--strict"]).code,
        1
    );
    let r = symspace(&["groups", p(&f)]);
    let rep = report(&r);
    assert_eq!(rep["data"]["inn_order"], 10);
    assert_eq!(rep["data"]["tr_order"], 5);
}

#[test]
fn derive_then_reduce_recovers_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit(dir.path(), "curvature-lts");
    let trip = dir.path().join("triplet.json");
    let back = dir.path().join("back.json");
    assert_eq!(symspace(&["derive", p(&f), "--output", p(&trip)]).code, 0);
    let r = symspace(&["reduce", p(&trip), "--output", p(&back)]);
    assert_eq!(r.code, 0);
    let original: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    let reduced: Value = serde_json::from_str(&fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(original, reduced);
}

#[test]
fn mutants_fail_as_predicted() {
    let dir = tempfile::tempdir().unwrap();
    for (name, axiom) in [
        ("mutant-rism1", "extension.ISM1"),
        ("mutant-regularity", "extension.ISM0"),
        ("mutant-rly4", "extension.LY6"),
    ] {
        let f = emit(dir.path(), name);
        let r = symspace(&["extend", p(&f)]);
        assert_eq!(r.code, 1, "{name}");
        let rep = report(&r);
        let c = check(&rep, axiom);
        assert_eq!(c["status"], "fail", "{name}");
        assert!(c["witness"].is_array());
    }
}

#[test]
fn module_operations_and_text_output() {
    let dir = tempfile::tempdir().unwrap();
    let h = emit(dir.path(), "gl2-gf7-hom");
    let k = dir.path().join("kernel.json");
    assert_eq!(
        symspace(&["reduce-module", p(&h), "--kernel", "--output", p(&k)]).code,
        0
    );
    let r = symspace(&["check", p(&k), "--format", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("PASS module_1"));
    let r = symspace(&["corpus", "run", "r3-gf3-alexander"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}
