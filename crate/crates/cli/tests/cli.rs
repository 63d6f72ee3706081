use std::io::Write;
use std::process::{Command, Output};

use minimal7::classify::{model, Shape};
use minimal7::field::{Field, RationalField};
use minimal7::liealg::{random_basis_change, MinimalAlgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minimal7")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn presentation<F: Field>(alg: &MinimalAlgebra<F>) -> String {
    let diffs: Vec<String> = alg
        .differentials()
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(k, d)| format!("\"{}\": \"{d}\"", k + 1))
        .collect();
    format!("{{\"dim\": 7, \"differentials\": {{{}}}}}", diffs.join(", "))
}

const ROW1: &str = r#"{"field":"Q","dim":7,"differentials":{"7":"x1^x2"}}"#;

#[test]
fn classify_row_one() {
    let o = run(&["classify", "--json", ROW1]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("row 1 (61-rank2) L_3 ⊕ A_4"), "{text}");
    assert!(text.contains("certificate: basis change, verified"));

    let o = run(&["classify", "--json", ROW1, "--format", "json"]);
    let v = json_of(&o);
    assert_eq!(v["canonical"]["row"], 1);
    assert_eq!(v["canonical"]["label"], "L_3 ⊕ A_4");
    assert_eq!(v["verified"], true);
    assert_eq!(v["certificate"]["kind"], "base");
}

#[test]
fn json_output_is_deterministic() {
    let input = r#"{"field":"Q","dim":7,"differentials":{"5":"x1^x4 + x2^x3","6":"-x1^x3 + x2^x4","7":"x1^x2 + x3^x4"}}"#;
    let a = run(&["classify", "--json", input, "--format", "json"]);
    let b = run(&["classify", "--json", input, "--format", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["canonical"]["row"], 16);
    assert_eq!(v["canonical"]["qclass"]["ramified"], serde_json::json!([{ "Prime": 2 }, "Infinity"]));

    let e1 = run(&["enumerate", "--field", "Fp", "--p", "5", "--samples", "300", "--seed", "9", "--format", "json"]);
    let e2 = run(&["enumerate", "--field", "Fp", "--p", "5", "--samples", "300", "--seed", "9", "--format", "json"]);
    assert_eq!(e1.stdout, e2.stdout);
}

#[test]
fn canonical_model_round_trips() {
    for input in [
        ROW1,
        r#"{"field":"Q","dim":7,"differentials":{"6":"x1^x2 + x1^x3","7":"2 x3^x4 - x1^x5"}}"#,
        r#"{"field":"Fp","p":7,"dim":7,"differentials":{"5":"x1^x2","6":"x3^x4","7":"x1^x3 + 3 x2^x4"}}"#,
    ] {
        let v = json_of(&run(&["classify", "--json", input, "--format", "json"]));
        let again = run(&["classify", "--json", &v["model"].to_string(), "--format", "json"]);
        assert_eq!(code(&again), 0);
        assert_eq!(json_of(&again)["canonical"], v["canonical"], "{input}");
    }
}

#[test]
fn iso_after_random_basis_change() {
    let q = RationalField::Q;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for shape in [Shape::Disjoint, Shape::DoubleLine, Shape::AnisotropicConic] {
        let m = model(&q, shape, &q.from_i64(-1), &q.from_i64(-1));
        let p = random_basis_change(&q, 7, &mut rng, 2);
        let moved = m.apply_basis_change(&p).unwrap();
        let o = run(&["iso", "--field", "Q", "--json", &presentation(&m), "--json", &presentation(&moved), "--format", "json"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v = json_of(&o);
        assert_eq!(v["isomorphic"], true, "{shape}");
        assert_eq!(v["left"]["row"], shape.row());
    }
    let o = run(&["iso", "--field", "Q", "--json", ROW1, "--json", r#"{"dim":7,"differentials":{"7":"x1^x2 + x3^x4"}}"#]);
    assert!(stdout(&o).starts_with("isomorphic: false"));
}

#[test]
fn enumerate_f3_has_fifteen_classes() {
    let o = run(&["enumerate", "--field", "Fp", "--p", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o)["count"], 15);
}

#[test]
fn input_from_file_and_brackets() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    // two brackets into X7 give a rank-4 dx7
    write!(file, "{}", r#"{"field": "Fp", "p": 5, "dim": 7, "brackets": [[1, 2, 7, "1"], [3, 4, 7, "1"]]}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let v = json_of(&run(&["classify", "--input", path, "--format", "json"]));
    assert_eq!(v["canonical"]["row"], 2);
    let b = json_of(&run(&["betti", "--input", path, "--format", "json"]));
    assert_eq!(b["betti"], serde_json::json!([1, 6, 14, 19, 19, 14, 6, 1]));
    assert_eq!(b["reference"]["match"], true);
}

#[test]
fn table_lists_sixteen_rows() {
    let o = run(&["table", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o);
    assert_eq!(v["normal_forms"].as_array().unwrap().len(), 16);
    let rows = v["reference"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r["expected"] == r["computed"]));
    assert_eq!(rows[0]["printed_sum"], 71);
    assert_eq!(rows[0]["computed_sum"], 96);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["classify", "--json", "{\"dim\": 7,"],
        vec!["classify", "--json", r#"{"dim":7,"differentials":{"7":"x1^x2"}}"#],
        vec!["classify", "--field", "Q", "--p", "3", "--json", ROW1],
        vec!["classify", "--field", "Fp", "--json", ROW1],
        vec!["classify", "--field", "Fp", "--p", "2", "--json", ROW1],
        vec!["classify", "--json", r#"{"field":"Q","dim":7,"differentials":{"9":"x1^x2"}}"#],
        vec!["iso", "--json", ROW1],
        vec!["classify", "--input", "/nonexistent/input.json"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn parse_errors_report_position() {
    let o = run(&["classify", "--json", "{\n\"dim\": 7,\n\"differentials\": }"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 18"), "{err}");
}

#[test]
fn classification_states_exit_two() {
    for input in [
        // length three
        r#"{"field":"Q","dim":7,"differentials":{"6":"x1^x2","7":"x1^x6"}}"#,
        // not flat
        r#"{"field":"Q","dim":7,"differentials":{"6":"x1^x2","7":"x3^x6"}}"#,
        // wrong dimension
        r#"{"field":"Q","dim":6,"differentials":{"6":"x1^x2"}}"#,
    ] {
        let o = run(&["classify", "--json", input, "--format", "json"]);
        assert_eq!(code(&o), 2, "{input}");
        let err: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(err["exit"], 2);
    }
    let o = run(&["betti", "--json", r#"{"field":"Q","dim":7,"differentials":{"6":"x1^x2","7":"x3^x6"}}"#]);
    assert_eq!(code(&o), 2);
}
