use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tdpoly::corpus::standard_corpus;
use tdpoly::IntPoly;

fn tdpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn edge_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn poly_of_path_family() {
    let out = tdpoly(&["poly", "--family", "path", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["coeffs"], serde_json::json!(["0", "0", "1", "2", "1"]));
    assert_eq!(v["gamma_t"], 2);
}

#[test]
fn envelope_shape_for_small_inputs() {
    let p2 = edge_file("n 2\n0 1\n");
    let out = tdpoly(&["poly", "--in", p2.path().to_str().unwrap()]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"n\":2,\"method\":\"tree\",\"gamma_t\":2,\"coeffs\":[\"0\",\"0\",\"1\"]}\n"
    );
    let k1 = edge_file("n 1\n");
    let v = json(&tdpoly(&["poly", "--in", k1.path().to_str().unwrap()]));
    assert_eq!(v["gamma_t"], Value::Null);
    assert_eq!(v["coeffs"], serde_json::json!([]));
}

#[test]
fn eval_cycle_at_minus_one() {
    let out = tdpoly(&["eval", "--family", "cycle", "--n", "6", "--at", "-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["evaluations"][0]["value"], "4");
}

#[test]
fn eval_complex_points() {
    let out = tdpoly(&[
        "eval",
        "--family",
        "path",
        "--n",
        "4",
        "--at",
        "0.5",
        "--at=-1+2i",
    ]);
    let v = json(&out);
    assert_eq!(v["evaluations"][0]["value"], "0.5625");
    assert_eq!(v["evaluations"][1]["value"], "12+16i");
    assert_eq!(
        code(&tdpoly(&[
            "eval", "--family", "path", "--n", "4", "--at", "x"
        ])),
        2
    );
}

#[test]
fn vertex_reduction_suite_passes() {
    let out = tdpoly(&[
        "verify", "--suite", "theorem1", "--trials", "100", "--n-max", "10", "--seed", "42",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["params"]["seed"], "42");
}

#[test]
fn failing_suite_exits_with_one() {
    let out = tdpoly(&[
        "verify", "--suite", "theorem3", "--n-max", "6", "--trials", "5",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn scan_csv_has_header_and_rows() {
    let out = tdpoly(&[
        "scan",
        "--suite",
        "minimal-tree",
        "--n",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("id,n,edges"));
}

#[test]
fn error_classes_map_to_exit_codes() {
    assert_eq!(
        code(&tdpoly(&[
            "poly", "--family", "path", "--n", "40", "--method", "brute"
        ])),
        3
    );
    assert_eq!(code(&tdpoly(&["poly", "--in", "/definitely/missing"])), 2);
    assert_eq!(code(&tdpoly(&["frobnicate"])), 2);
    assert_eq!(
        code(&tdpoly(&[
            "poly", "--family", "path", "--n", "4", "--format", "csv"
        ])),
        2
    );
    assert_eq!(code(&tdpoly(&["poly", "--family", "cycle", "--n", "2"])), 2);
    assert_eq!(
        code(&tdpoly(&[
            "poly", "--family", "cycle", "--n", "5", "--method", "tree"
        ])),
        2
    );
    let bad = edge_file("n 3\n0 0\n");
    assert_eq!(
        code(&tdpoly(&["poly", "--in", bad.path().to_str().unwrap()])),
        2
    );
    assert_eq!(
        code(&tdpoly(&["scan", "--suite", "minimal-tree", "--n", "9"])),
        3
    );
    assert_eq!(
        code(&tdpoly(&[
            "--budget", "8", "poly", "--family", "cycle", "--n", "9", "--method", "brute"
        ])),
        3
    );
}

#[test]
fn auto_and_brute_agree_and_round_trip() {
    for e in standard_corpus(9, 12, 5).unwrap() {
        let f = edge_file(&e.graph.to_edge_list());
        let path = f.path().to_str().unwrap();
        let auto = json(&tdpoly(&["poly", "--in", path]));
        let brute = json(&tdpoly(&["poly", "--in", path, "--method", "brute"]));
        assert_eq!(auto["coeffs"], brute["coeffs"], "{}", e.id);
        let coeffs: Vec<String> = serde_json::from_value(auto["coeffs"].clone()).unwrap();
        let poly = IntPoly::from_decimal_strings(&coeffs).unwrap();
        assert_eq!(poly, tdpoly::brute_force_tdp(&e.graph).unwrap());
        assert_eq!(auto["gamma_t"], serde_json::json!(poly.min_degree()));
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "scan", "--suite", "degree2", "--n", "8", "--trials", "20", "--seed", "7",
    ];
    assert_eq!(tdpoly(&args).stdout, tdpoly(&args).stdout);
    let args = ["verify", "--suite", "minus-one", "--trials", "30"];
    assert_eq!(tdpoly(&args).stdout, tdpoly(&args).stdout);
}

#[test]
fn family_table_and_two_corona() {
    let out = tdpoly(&["family", "--family", "star", "--n-min", "2", "--n-max", "5"]);
    let lines: Vec<Value> = out
        .stdout
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(
        lines[3]["coeffs"],
        serde_json::json!(["0", "0", "4", "6", "4", "1"])
    );
    let tri = edge_file("n 3\n0 1\n1 2\n0 2\n");
    let v = json(&tdpoly(&[
        "poly",
        "--family",
        "two-corona",
        "--base",
        tri.path().to_str().unwrap(),
    ]));
    assert_eq!((v["n"].as_u64(), v["gamma_t"].as_u64()), (Some(9), Some(6)));
}
