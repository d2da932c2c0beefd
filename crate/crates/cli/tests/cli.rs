use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cosym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosym")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn emit(dir: &Path, name: &str) {
    let out = cosym(&["catalogue", "emit", name, "--dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

fn p(dir: &Path, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_string()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn marrero_verifies_as_cosymplectic() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "marrero(1,1)");
    let out = cosym(&["verify", &p(dir.path(), "marrero_1_1.json"), &p(dir.path(), "marrero_1_1_struct.json"), "--kind", "cosymplectic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "pass");
}

#[test]
fn heisenberg_fails_with_the_offending_pair() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "heisenberg3");
    let out = cosym(&["verify", &p(dir.path(), "heisenberg3.json"), &p(dir.path(), "heisenberg3_struct.json"), "--kind", "cosymplectic"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    let failed: Vec<&Value> = v["stages"].as_array().unwrap().iter().filter(|s| s["verdict"] == "fail").collect();
    assert_eq!(failed[0]["name"], "dα = 0");
    assert_eq!(failed[0]["witness"]["detail"]["names"], serde_json::json!(["X", "Y"]));
}

#[test]
fn malformed_json_exits_two_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"dim\": 3,\n  \"brackets\": [\n}\n").unwrap();
    let out = cosym(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn inconsistent_antisymmetric_completion_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("conflict.json");
    std::fs::write(
        &bad,
        r#"{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "1"}}, {"i": 2, "j": 1, "coeffs": {"1": "1"}}]}"#,
    )
    .unwrap();
    let out = cosym(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_catalogue_entry_exits_two() {
    assert_eq!(cosym(&["catalogue", "emit", "klein_bottle"]).status.code(), Some(2));
}

#[test]
fn extend_then_reduce_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "dorfmeister_base(1)");
    let prefix = p(dir.path(), "ext");
    let out = cosym(&["extend", &p(dir.path(), "dorfmeister_base_1.json"), &p(dir.path(), "dorfmeister_base_1_D.json"), "--out", &prefix]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let back = p(dir.path(), "back");
    let out = cosym(&["reduce", &p(dir.path(), "ext.json"), &p(dir.path(), "ext_struct.json"), "--out", &back]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let read = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap() };
    assert_eq!(read("back.json"), read("dorfmeister_base_1.json"));
    assert_eq!(read("back_D.json"), read("dorfmeister_base_1_D.json"));
}

#[test]
fn json_output_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "hyperbolic_cosymplectic");
    let alg = p(dir.path(), "hyperbolic_cosymplectic.json");
    let first = cosym(&["validate", &alg]);
    assert_eq!(first.status.code(), Some(0));
    let text = std::fs::read_to_string(&alg).unwrap();
    let reparsed: Value = serde_json::from_str(&text).unwrap();
    let copy = dir.path().join("copy.json");
    std::fs::write(&copy, serde_json::to_string(&reparsed).unwrap()).unwrap();
    let second = cosym(&["validate", copy.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn deform_torus_family() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "torus(3)");
    let out = cosym(&[
        "deform",
        "--base",
        &p(dir.path(), "torus_3.json"),
        "--structure",
        &p(dir.path(), "torus_3_struct.json"),
        "--jt",
        &p(dir.path(), "torus_3_jt.json"),
        "--t-list",
        "0,1/10,1/2,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    assert_eq!(v["results"][0]["data"]["g_t"], serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
}

#[test]
fn kahler_identities_refuse_a_non_cosymplectic_structure() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "heisenberg3");
    let out = cosym(&["kahler-identities", &p(dir.path(), "heisenberg3.json"), &p(dir.path(), "heisenberg3_struct.json")]);
    assert_eq!(out.status.code(), Some(1));
}

fn check_report_fixture(entry: &str, stem: &str, format: &str, expected_code: i32) {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), entry);
    let out = cosym(&["--format", format, "report", &p(dir.path(), &format!("{stem}.json")), &p(dir.path(), &format!("{stem}_struct.json"))]);
    assert_eq!(out.status.code(), Some(expected_code));
    let ext = if format == "md" { "md" } else { "json" };
    let path = fixture(&format!("report_{stem}.{ext}"));
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing fixture {}", path.display()));
    assert!(out.stdout == want, "report for {entry} differs from {}", path.display());
}

#[test]
fn report_fixtures_are_byte_stable() {
    check_report_fixture("marrero(1,1)", "marrero_1_1", "json", 0);
    check_report_fixture("marrero(1,1)", "marrero_1_1", "md", 0);
    check_report_fixture("heisenberg3", "heisenberg3", "json", 1);
}
