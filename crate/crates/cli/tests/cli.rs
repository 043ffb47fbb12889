use std::process::{Command, Output};

use serde_json::Value;

fn snakelat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snakelat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn bruhat_report() {
    let out = snakelat(&["bruhat", "1>2<3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["report"];
    assert_eq!((r["matching_nodes"].as_u64(), r["submodule_nodes"].as_u64(), r["interval_nodes"].as_u64()), (Some(5), Some(5), Some(5)));
    assert_eq!(r["sigma"], serde_json::json!([3, 1, 4, 2]));
    assert_eq!(v["reduced_words"].as_array().unwrap().len(), 2);
}

#[test]
fn resolve_crossing_text() {
    let out = snakelat(&["--format", "text", "resolve", "--cross", "1>2>3>4<5>6", "7<3>4>8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1>2>3>4>8 7<3>4<5>6 1>2<7 6<5<8\n");
}

#[test]
fn resolve_grafting_json() {
    let out = snakelat(&["resolve", "--graft", "1>2", "2", "<", "3>4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["resolution"]["w3"], "1>2<3>4");
    assert_eq!(v[0]["instance"]["kind"], "grafting");
}

#[test]
fn sweep_passes() {
    let out = snakelat(&["verify", "--sweep", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["words"], 127);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn phi_report_schema() {
    let out = snakelat(&["phi", "--cross", "1>2>3>4<5>6", "7<3>4>8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)[0];
    assert_eq!(r["counts"], serde_json::json!([14, 7, 6, 13, 5, 4]));
    assert_eq!(r["identity_holds"], true);
    assert_eq!(r["routes"].as_array().unwrap().len(), 98);
    assert!(r["routes"].as_array().unwrap().iter().all(|t| t == "34" || t == "56"));
}

#[test]
fn build_formats() {
    let v = json(&snakelat(&["build", "1>2>3>4<5>6"]));
    assert_eq!(v["directions"], serde_json::json!(["R", "U", "R", "R", "R"]));
    let dot = snakelat(&["--format", "dot", "lattice", "><"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn output_is_byte_stable() {
    let a = snakelat(&["submodules", "1<2>3>1<2"]);
    let b = snakelat(&["submodules", "1<2>3>1<2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_one() {
    assert_eq!(snakelat(&["build", "1>>2"]).status.code(), Some(1));
    assert_eq!(snakelat(&["resolve", "--graft", "1>2", "1", ">", "3"]).status.code(), Some(1));
    assert_eq!(snakelat(&["nonsense"]).status.code(), Some(1));
}
