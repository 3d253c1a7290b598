use std::path::PathBuf;
use std::process::{Command, Output};

fn akhodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akhodge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn manifest(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests").join(name).display().to_string()
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("akhodge-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn report_json_on_kodaira_thurston() {
    let o = akhodge(&["report", "--builtin", "kodaira_thurston", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains(r#""b":[1,3,4,3,1]"#));
    assert!(out.contains(r#""hlc":{"k1":false}"#));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["b2_plus"], 2);
    assert_eq!(v["integrable"], false);
}

#[test]
fn report_markdown_has_diamond() {
    let o = akhodge(&["report", "--builtin", "torus4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Betti numbers: [1, 4, 6, 4, 1]"), "{out}");
    assert!(out.contains("| 2 | 1 |  | 4 |  | 1 |"), "{out}");
}

#[test]
fn tilde_constant_in_degree_one() {
    let o = akhodge(&["constants", "--builtin", "kodaira_thurston", "--family", "Mtilde", "--degree", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""best_constant":"2""#), "{}", stdout(&o));
}

#[test]
fn validate_builtin_and_file() {
    let o = akhodge(&["validate", "--builtin", "torus4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| metric_positive_definite | pass |"));
    let o = akhodge(&["validate", "--file", &manifest("kt_times_t2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""valid":true"#));
}

#[test]
fn j_not_squaring_to_minus_one_is_invalid() {
    let text = r#"{"schema":1,"name":"bad","dimension":2,"brackets":[],
        "omega":[{"i":1,"j":2,"c":"1"}],"J":[["1","0"],["0","1"]],"compact_quotient":"none"}"#;
    let o = akhodge(&["validate", "--file", &temp_file("bad_j.json", text)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("| j_squared_minus_one | fail |"), "{}", stdout(&o));
}

#[test]
fn malformed_manifest_exits_one() {
    let o = akhodge(&["report", "--file", &temp_file("garbage.json", "{\"schema\": 1, \"name\": ")]);
    assert_eq!(o.status.code(), Some(1));
    let o = akhodge(&["report", "--file", &temp_file("unknown.json", r#"{"schema":1,"extra":true}"#)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_file_and_usage_errors_exit_three() {
    assert_eq!(akhodge(&["report", "--file", "/nonexistent/manifest.json"]).status.code(), Some(3));
    assert_eq!(akhodge(&["report", "--builtin", "no_such_manifold"]).status.code(), Some(3));
    assert_eq!(akhodge(&["report"]).status.code(), Some(3));
    assert_eq!(akhodge(&["spectrum", "--builtin", "torus4", "--operator", "nabla"]).status.code(), Some(3));
}

#[test]
fn identities_and_hlc_pass() {
    let o = akhodge(&["identities", "--builtin", "kodaira_thurston", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains(r#""status":"fail""#));
    let o = akhodge(&["hlc", "--builtin", "kodaira_thurston"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn spectrum_of_d_on_one_forms() {
    let o = akhodge(&["spectrum", "--builtin", "kodaira_thurston", "--degree", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["smallest_positive"]["value"], "1", "{v}");
}

#[test]
fn decompose_a_two_form() {
    let o = akhodge(&["decompose", "--builtin", "kodaira_thurston", "--form", "e1^e2=1,e3^e4=-1/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["closed"], true);
    assert_eq!(akhodge(&["decompose", "--builtin", "kodaira_thurston"]).status.code(), Some(3));
}

#[test]
fn report_is_deterministic() {
    let args = ["report", "--file", &manifest("kt_times_t2.json"), "--format", "json", "--seed", "3"];
    let a = akhodge(&args);
    let b = akhodge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
