mod common;

use std::process::Command;

use common::fixture_str;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, String) {
    run_env(args, None)
}

fn run_env(args: &[&str], seed: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arrangeatlas"));
    cmd.args(args).env_remove("ARRANGEATLAS_SEED");
    if let Some(s) = seed {
        cmd.env("ARRANGEATLAS_SEED", s);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (code, serde_json::from_str(&text).expect("stdout is JSON"))
}

fn f(name: &str) -> String {
    fixture_str(name)
}

fn assert_error(args: &[&str], code: i32, reason: &str) -> Value {
    let (got, v) = run_json(args);
    assert_eq!(got, code, "exit code for {args:?}: {v}");
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["reason"], reason, "{v}");
    v
}

#[test]
fn flats_of_x3() {
    let (code, v) = run_json(&["flats", &f("x3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["command"], "flats");
    assert_eq!(v["flat_count"], 5);
    let indices: Vec<&Value> = v["flats"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| &x["indices"])
        .collect();
    assert_eq!(
        indices,
        [
            &json!([]),
            &json!([0]),
            &json!([1]),
            &json!([2]),
            &json!([0, 1, 2])
        ]
    );
    assert_eq!(v["flats"][3]["basis"], json!([["1", "1"]]));
}

#[test]
fn keys_come_in_fixed_order() {
    let (_, text) = run(&["limit", &f("x3.json"), "--vector", "1,1"]);
    assert!(
        text.starts_with(r#"{"ok":true,"command":"limit","limit":["inf","inf","0"],"flat":[2]"#),
        "{text}"
    );
    assert!(text.ends_with('\n'));
}

#[test]
fn membership_reports_reason() {
    let (code, v) = run_json(&["membership", &f("x3.json"), "--point", "1,2,inf"]);
    assert_eq!(code, 0);
    assert_eq!(v["member"], false);
    assert_eq!(v["reason"], "support-not-a-flat");

    let (_, v) = run_json(&["membership", &f("x3.json"), "--point", "1,2,0"]);
    assert_eq!(v["reason"], "inconsistent-values");

    let (_, v) = run_json(&["membership", &f("x3.json"), "--point", "1,2,-1"]);
    assert_eq!(v["member"], true);
}

#[test]
fn act_translates_finite_coordinates() {
    let (code, v) = run_json(&[
        "act",
        &f("x3.json"),
        "--vector",
        "1,-1/2",
        "--point",
        "inf,inf,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["point"], json!(["inf", "inf", "3/2"]));
}

#[test]
fn act_on_non_member_is_domain_error() {
    assert_error(
        &[
            "act",
            &f("x3.json"),
            "--vector",
            "1,1",
            "--point",
            "1,2,inf",
        ],
        1,
        "not-a-member",
    );
}

#[test]
fn restrict_rejects_non_flat() {
    let v = assert_error(
        &["restrict", &f("x3.json"), "--flat", "0,1"],
        1,
        "not-a-flat",
    );
    assert_eq!(v["error"]["witness"]["indices"], json!([0, 1]));
}

#[test]
fn slice_injects_point() {
    let (code, v) = run_json(&["slice", &f("x3.json"), "--flat", "2", "--point", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["distinguished_point"], json!(["inf", "inf", "0"]));
    assert_eq!(v["image"], json!(["3", "3", "0"]));
}

#[test]
fn sum_map_is_not_a_morphism() {
    let (code, v) = run_json(&[
        "check-morphism",
        &f("x3.json"),
        &f("p1.json"),
        "--map",
        &f("map-sum.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["morphism"], false);
    assert_eq!(v["hyperplane_witness"]["target"], 0);
    assert_eq!(
        v["hyperplane_witness"]["preimage"]["basis"],
        json!([["1", "-1"]])
    );

    let v = assert_error(
        &[
            "extend-morphism",
            &f("x3.json"),
            &f("p1.json"),
            "--map",
            &f("map-sum.json"),
            "--point",
            "1,2,-1",
        ],
        1,
        "invalid-morphism",
    );
    assert_eq!(v["error"]["witness"]["target"], 0);
}

#[test]
fn projection_extends() {
    let (code, v) = run_json(&[
        "extend-morphism",
        &f("x3.json"),
        &f("p1.json"),
        "--map",
        &f("map-proj.json"),
        "--point",
        "1,2,-1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["image"], json!(["1"]));
}

#[test]
fn nonessential_arrangement_has_no_variety() {
    let (code, _) = run_json(&["flats", &f("nonessential.json")]);
    assert_eq!(code, 0);
    assert_error(
        &["limit", &f("nonessential.json"), "--vector", "1,0"],
        1,
        "not-essential",
    );
}

#[test]
fn malformed_arrangements() {
    let v = assert_error(
        &["flats", &f("duplicate-normals.json")],
        1,
        "duplicate-hyperplane",
    );
    assert_eq!(v["error"]["witness"], json!({"first": 0, "second": 2}));
    let v = assert_error(&["flats", &f("zero-normal.json")], 1, "zero-normal");
    assert_eq!(v["error"]["witness"]["index"], 1);
    assert_error(&["flats", &f("bad-rational.json")], 2, "bad-rational");
}

#[test]
fn invalid_collection() {
    let (code, v) = run_json(&["validate-pha", &f("lone-plane.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], false);
    assert_eq!(v["axiom3_failures"][0]["reason"], "not-essential-in-F");
    assert_error(&["atlas", &f("lone-plane.json")], 1, "invalid-pha");
}

#[test]
fn five_point_atlas() {
    let (code, v) = run_json(&["validate-pha", &f("fig1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["member_count"], 16);
    let (code, v) = run_json(&["cocycle", &f("fig1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["cocycle"], true);
    assert_eq!(v["separation"], true);
}

#[test]
fn usage_errors() {
    assert_error(&["no-such-command"], 2, "usage");
    assert_error(&["flats"], 2, "usage");
    assert_error(&["flats", "/nonexistent/file.json"], 2, "io");
    assert_error(
        &["limit", &f("x3.json"), "--vector", "1,x"],
        2,
        "bad-rational",
    );
    assert_error(&["restrict", &f("x3.json"), "--flat", "a"], 2, "bad-index");
}

#[test]
fn help_exits_zero() {
    let (code, text) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(text.contains("hasse-dot"));
}

#[test]
fn seed_controls_sampling() {
    let a = run_env(&["cocycle", &f("c3.json")], Some("5"));
    let b = run_env(&["cocycle", &f("c3.json")], Some("5"));
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let (code, text) = run_env(&["cocycle", &f("b2.json")], Some("abc"));
    assert_eq!(code, 2);
    assert!(text.contains("bad-seed"));
}

#[test]
fn hasse_dot_of_b2() {
    let (code, text) = run(&["hasse-dot", &f("b2.json")]);
    assert_eq!(code, 0);
    assert_eq!(
        text,
        "digraph hasse {\n  m0 [label=\"F0:2\"];\n  m1 [label=\"F1:1\"];\n  m2 [label=\"F1:1\"];\n  \
         m3 [label=\"F2:0\"];\n  m0 -> m1;\n  m0 -> m2;\n  m1 -> m3;\n  m2 -> m3;\n}\n"
    );
}

#[test]
fn threads_flag_does_not_change_output() {
    let one = run(&["--threads", "1", "orbit-table", &f("fig1.json")]);
    let four = run(&["--threads", "4", "orbit-table", &f("fig1.json")]);
    assert_eq!(one, four);
    assert_eq!(one.0, 0);
}
