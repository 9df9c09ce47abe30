use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_string_lossy().into_owned()
}

fn mackey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mackey")).args(args).output().expect("spawn mackey")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dual_lists_strata_and_fibers() {
    let o = mackey(&["dual", &fixture("p4g.json"), &fixture("p4g_triangle.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in ["| z_0 | vertex | <R,S> | 5 |", "| z_1 | vertex | <S,R^2> | 1 |", "| S_3 | segment | <S> | 2 |"] {
        assert!(text.contains(row), "{row}\n{text}");
    }
    assert!(text.contains("| sigma | 2 |"));
}

#[test]
fn dual_json_is_parseable() {
    let o = mackey(&["--format", "json", "dual", &fixture("p4g.json"), &fixture("p4g_triangle.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 7);
    assert_eq!(v["orbit_classes"].as_array().unwrap().len(), 7);
}

#[test]
fn cocycle_at_z1() {
    let o = mackey(&["--format", "json", "cocycle", &fixture("p4g.json"), "--point", "0,1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cocycle"].as_array().unwrap().len(), 4);
    assert_eq!(v["fiber"][0]["label"], "sigma");
}

#[test]
fn cocycle_rejects_wrong_dimension() {
    let o = mackey(&["cocycle", &fixture("p4g.json"), "--point", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limits_at_z2() {
    let o = mackey(&["--format", "json", "limits", &fixture("p4g.json"), &fixture("query_z2_minus_i.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let labels: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["zeta1", "zeta3", "tau"]);
}

#[test]
fn limits_flags_class_mismatch() {
    let o = mackey(&["limits", &fixture("p4g.json"), &fixture("query_z1_class_mismatch.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("flags: class_mismatch"));
}

#[test]
fn chartab_of_d4() {
    let o = mackey(&["chartab", &fixture("p4g.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| chi4 | 2 | 0 | 0 | -2 | 0 |"));
}

#[test]
fn verify_single_suite_passes() {
    let o = mackey(&["verify", &fixture("p4g.json"), "--suite", "branching,peterweyl"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(", 0 failed"));
}

#[test]
fn verify_corrupted_cocycle_exits_one() {
    let o = mackey(&["verify", &fixture("p4g.json"), "--cocycle", &fixture("corrupted_cocycle.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_good_cocycle_exits_zero() {
    let o = mackey(&["verify", &fixture("p4g.json"), "--cocycle", &fixture("cocycle_z1.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_schema_exits_two() {
    let o = mackey(&["dual", &fixture("bad_schema.json"), &fixture("p4g_triangle.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("glide"));
}

#[test]
fn missing_file_exits_two() {
    let o = mackey(&["chartab", &fixture("no_such_group.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn other_groups_verify() {
    for g in ["p1.json", "p4.json"] {
        let o = mackey(&["verify", &fixture(g)]);
        assert_eq!(o.status.code(), Some(0), "{g}: {}", stdout(&o));
    }
}

#[test]
fn outputs_are_deterministic() {
    let args = ["--format", "json", "verify", &fixture("p4g.json"), "--suite", "fixedpoint"];
    assert_eq!(mackey(&args).stdout, mackey(&args).stdout);
}
