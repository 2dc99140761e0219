//! End-to-end tests of the command-line interface: exact output for the
//! fixture computations, agreement between text and JSON, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gencayley"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("gencayley-test-{name}-{}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn reduce_fixture_word() {
    let out = run(&["reduce", "--system", "fig2", "--level", "1", "A B C B"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "A B");
}

#[test]
fn project_fixture_words() {
    let out = run(&[
        "project",
        "--system",
        "fig2",
        "--level",
        "2",
        "D E G H K L N P O M J I",
    ]);
    assert_eq!(stdout(&out).trim(), "A B C B");
    let out = run(&[
        "project",
        "--system",
        "fig2",
        "--level",
        "2",
        "D E G H K L N P O M J I G F",
    ]);
    assert_eq!(stdout(&out).trim(), "A B C B / A");
}

#[test]
fn multiplicity_fixture() {
    let out = run(&[
        "multiplicity",
        "--system",
        "fig2",
        "--level",
        "1",
        "--vertex",
        "C",
        "--upto",
        "2",
    ]);
    assert!(stdout(&out).contains("c_2(C) = 2"));

    let json = run(&[
        "multiplicity",
        "--system",
        "fig2",
        "--level",
        "1",
        "--vertex",
        "C",
        "--upto",
        "2",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(value["counts"][0], 2);
}

#[test]
fn text_and_json_agree_on_reduction() {
    let text = run(&[
        "reduce",
        "--system",
        "interval",
        "--depth",
        "3",
        "--level",
        "3",
        "v0 v1 v2 v1",
    ]);
    let json = run(&[
        "reduce",
        "--system",
        "interval",
        "--depth",
        "3",
        "--level",
        "3",
        "v0 v1 v2 v1",
        "--format",
        "json",
    ]);
    assert_eq!(stdout(&text).trim(), "v0 v1");
    let value: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(value["letters"], serde_json::json!(["v0", "v1"]));
    assert_eq!(value["slash_tail"], serde_json::Value::Null);
}

#[test]
fn space_gen_round_trips_through_validate() {
    let out = run(&["space", "gen", "ladder", "--depth", "4"]);
    assert!(out.status.success());
    let path = write_temp("ladder", &stdout(&out));
    let validated = run(&["validate", "--system", path.to_str().unwrap()]);
    assert!(validated.status.success());
    std::fs::remove_file(path).ok();
}

#[test]
fn validate_reports_violations_on_stderr_with_exit_1() {
    let broken = "\
system broken
level 1
vertices a b
edges a-b
subdiv 2
basepoint a
level 2
vertices a2 m b2
edges a2-m m-b2
subdiv 2
basepoint b2
map 1
a2 -> a
m -> a-b:1
b2 -> b
";
    let path = write_temp("broken", broken);
    let out = run(&["validate", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("LEVEL 2"), "stderr was: {stderr}");
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["reduce", "--level", "1", "A B"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn distance_of_a_sequence_with_itself_contains_zero() {
    let seq = "\
1: v0 v1
2: v0 v1 v2
3: v0 v1 v2 v3 v4
4: v0 v1 v2 v3 v4 v5 v6 v7 v8
5: v0 v1 v2 v3 v4 v5 v6 v7 v8 v9 v10 v11 v12 v13 v14 v15 v16
6: v0 v1 v2 v3 v4 v5 v6 v7 v8 v9 v10 v11 v12 v13 v14 v15 v16 v17 v18 v19 v20 v21 v22 v23 v24 v25 v26 v27 v28 v29 v30 v31 v32
";
    let path = write_temp("full6", seq);
    let out = run(&[
        "distance",
        "--system",
        "interval",
        "--depth",
        "6",
        path.to_str().unwrap(),
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(line.contains("(equal)"), "got: {line}");
    let json = run(&[
        "distance",
        "--system",
        "interval",
        "--depth",
        "6",
        path.to_str().unwrap(),
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(value["verdict"], "equal");
    let lo: String = value["lo"].as_str().unwrap().to_string();
    assert!(lo.starts_with('-') || lo == "0");
    std::fs::remove_file(path).ok();
}

#[test]
fn stabilize_and_length_pipeline() {
    let seq = "1: v0 v1\n2: v0 v1 v2\n3: v0 v1 v2 v3 v4\n";
    let path = write_temp("red3", seq);
    let out = run(&[
        "stabilize",
        "--system",
        "interval",
        "--depth",
        "3",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: stable"));
    let out = run(&[
        "length",
        "--system",
        "interval",
        "--depth",
        "3",
        path.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "[5/2^4, 1/2^1)");
    std::fs::remove_file(path).ok();
}

#[test]
fn tree_export_formats() {
    let dot = run(&[
        "tree", "export", "--system", "interval", "--depth", "3", "--level", "2", "--format", "dot",
    ]);
    let text = stdout(&dot);
    assert!(text.starts_with("graph"));
    assert!(text.contains("n0 -- n1"));
    let json = run(&[
        "tree", "export", "--system", "interval", "--depth", "3", "--level", "2", "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert_eq!(value["nodes"].as_array().unwrap().len(), 3);
}

#[test]
fn multiply_and_invert_pipeline() {
    // The first petal loop of the depth-4 wedge of circles, level by level.
    let mut petal1 = String::new();
    for n in 1..=4u32 {
        let len = 1u64 << (n + 1);
        let mut letters = vec!["o".to_string()];
        letters.extend((1..len).map(|i| format!("p1_{i}")));
        letters.push("o".to_string());
        petal1.push_str(&format!("{n}: {}\n", letters.join(" ")));
    }
    let a = write_temp("petal1", &petal1);
    let out = run(&[
        "multiply",
        "--system",
        "hawaiian",
        "--depth",
        "4",
        a.to_str().unwrap(),
        a.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["verdict"]["stable"], true);
    // Twice around petal 1: the level-1 word has 9 letters.
    assert_eq!(value["sequence"][0]["letters"].as_array().unwrap().len(), 9);

    let inv = run(&[
        "invert",
        "--system",
        "hawaiian",
        "--depth",
        "4",
        a.to_str().unwrap(),
    ]);
    assert!(inv.status.success());
    assert!(stdout(&inv).contains("verdict: stable"));
    std::fs::remove_file(a).ok();
}

#[test]
fn check_is_deterministic_under_seed() {
    let first = run(&[
        "check", "--system", "fig2", "--seed", "42", "--format", "json",
    ]);
    let second = run(&[
        "check", "--system", "fig2", "--seed", "42", "--format", "json",
    ]);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
    let value: serde_json::Value = serde_json::from_str(stdout(&first).trim()).unwrap();
    assert_eq!(value["passed"], true);
}
