use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
        .display()
        .to_string()
}

fn strat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    strat(args).status.code().expect("exit code")
}

fn report(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = strat(&full);
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn builtins_reproduce() {
    for name in ["remark-a3", "prop-3-2-i", "prop-3-2-ii", "prop-3-2-iii", "example-1-14"] {
        assert_eq!(code(&["builtin", name]), 0, "{name}");
    }
    assert_eq!(code(&["builtin", "nope"]), 2);
}

#[test]
fn remark_a3_report() {
    let r = report(&["builtin", "remark-a3"]);
    let p = &r["result"]["payload"];
    assert_eq!(p["colimit_classes"], 1);
    assert_eq!(p["almost_filtered"], false);
    for o in ["a", "b", "c", "d"] {
        assert_eq!(p["mono_into_colim"][o], false);
    }
    let w = &p["witness"];
    assert_eq!(
        (&w["d"], &w["d1"], &w["d2"], &w["d3"]),
        (&"c".into(), &"a".into(), &"d".into(), &"b".into())
    );
    assert_eq!((&w["x"], &w["y"]), (&"0".into(), &"1".into()));
}

#[test]
fn prop_3_2_i_fails_at_p1() {
    let r = report(&["builtin", "prop-3-2-i"]);
    assert_eq!(r["result"]["payload"]["failure"]["chain"], "p1");
}

#[test]
fn example_1_14_report() {
    let r = report(&["builtin", "example-1-14"]);
    let p = &r["result"]["payload"];
    assert_eq!(p["chains"], 25);
    assert_eq!(p["constant_point"], true);
    assert_eq!(p["global_pointing"], false);
}

#[test]
fn verdict_exit_codes() {
    assert_eq!(code(&["pointing", &data("delta1.json")]), 0);
    assert_eq!(code(&["pointing", &data("two-points.json")]), 1);
    assert_eq!(code(&["lift", &data("horn-square.json")]), 0);
    assert_eq!(code(&["lift", &data("horn-square-nolift.json")]), 1);
    assert_eq!(code(&["rlp", &data("identity.json"), "--cells", "J", "--nmax", "2"]), 0);
    assert_eq!(
        code(&["rlp", &data("points-into-edge.json"), "--cells", "I", "--nmax", "1"]),
        1
    );
    assert_eq!(code(&["compare", &data("order-mismatch.json")]), 1);
    assert_eq!(code(&["almost-filtered", &corpus("remark-a3.json")]), 1);
    assert_eq!(code(&["retract", "0,0,1"]), 0);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&["nerve", &data("missing.json")]), 2);
    assert_eq!(code(&["export-dot", "sset", &data("chain2.json")]), 2);
    assert_eq!(code(&["rlp", &data("identity.json"), "--cells", "K"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(br#"{"elements": ["a", "b"], "relations": [["a", "b"], ["b", "a"]]}"#)
        .unwrap();
    assert_eq!(code(&["nerve", f.path().to_str().unwrap()]), 2);
}

#[test]
fn budget_exceeded_exits_3() {
    assert_eq!(code(&["spi0", &data("delta1.json"), "--budget", "1"]), 3);
}

#[test]
fn reports_are_deterministic() {
    let poset = data("example-poset.json");
    let args = [
        "--json",
        "numeric",
        "glue",
        "--poset",
        poset.as_str(),
        "--samples",
        "50",
        "--seed",
        "11",
    ];
    let a = strat(&args);
    let b = strat(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = strat(&[
        "--json",
        "numeric",
        "glue",
        "--poset",
        &poset,
        "--samples",
        "50",
        "--seed",
        "12",
    ]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(
        strat(&["--json", "builtin", "example-1-14"]).stdout,
        strat(&["--json", "builtin", "example-1-14"]).stdout
    );
}

#[test]
fn report_shape_and_digest() {
    let r = report(&["nerve", &data("chain2.json")]);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["result"]["census"], serde_json::json!([2, 1]));
    let digest = r["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    // a report re-parses to an equal value
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), r);
}

#[test]
fn dot_outputs() {
    let out = String::from_utf8(strat(&["export-dot", "poset", &data("chain2.json")]).stdout).unwrap();
    assert_eq!(out.lines().filter(|l| l.contains("->")).count(), 1);
    let nerve = String::from_utf8(strat(&["--dot", "nerve", &data("chain2.json")]).stdout).unwrap();
    assert_eq!(nerve.matches("digraph").count(), 2);
    let spi0 = String::from_utf8(strat(&["--dot", "spi0", &data("delta1.json")]).stdout).unwrap();
    assert!(spi0.starts_with("digraph"));
    assert_eq!(spi0.lines().filter(|l| l.contains("->")).count(), 2);
    assert_eq!(code(&["--dot", "pointing", &data("delta1.json")]), 2);
}

#[test]
fn spi0_table() {
    let r = report(&["spi0", &data("delta1.json")]);
    assert_eq!(r["result"]["chains"].as_array().unwrap().len(), 3);
    let one = report(&["spi0", &data("delta1.json"), "--chain", "p<q"]);
    assert_eq!(one["result"]["classes"], serde_json::json!(["0.1"]));
}

#[test]
fn colim_of_cells() {
    let r = report(&["colim", &data("cell.json")]);
    assert_eq!(r["result"]["counts"], serde_json::json!([3, 1]));
    assert!(r["result"]["legs"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l["mono"] == true));
}

#[test]
fn numeric_h217() {
    let r = report(&[
        "numeric",
        "h217",
        "--psi",
        "q0<q1",
        "--targets",
        "q1",
        "--point",
        "0.5,0.5",
        "--s",
        "1.0",
    ]);
    assert_eq!(r["result"]["coords"], serde_json::json!([0.0, 1.0]));
    assert_eq!(r["result"]["phi_p"], "q1");
    let bad = [
        "numeric",
        "h217",
        "--psi",
        "q0<q1",
        "--targets",
        "q0",
        "--point",
        "0.5,0.5",
        "--s",
        "0.5",
    ];
    assert_eq!(code(&bad), 2);
}
