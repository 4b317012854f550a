use std::path::PathBuf;
use std::process::{Command, Output};

use dioph::oracle::{modules_equal, ModuleSpan};
use dioph::ring::ints;
use dioph::Int;
use serde_json::Value;

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, Output) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = dioph(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out)
}

fn temp_file(name: &str, contents: &[u8]) -> PathBuf {
    let path = std::env::temp_dir().join(format!("dioph-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn int_rows(v: &Value) -> Vec<Vec<Int>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().parse().unwrap())
                .collect()
        })
        .collect()
}

fn outcomes(doc: &Value) -> Vec<(String, bool)> {
    doc["instances"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["checks"].as_array().unwrap().clone())
        .map(|k| {
            (
                k["name"].as_str().unwrap().to_string(),
                k["pass"].as_bool().unwrap(),
            )
        })
        .collect()
}

#[test]
fn solve_worked_example() {
    let (v, out) = json(&["solve", "12", "4", "2", "3"]);
    assert!(out.status.success());
    assert_eq!(v["det"], "12");
    assert_eq!(v["pivot"], 1);
    let basis = int_rows(&v["basis"]);
    let reference: Vec<Vec<Int>> = vec![
        ints(&[-1, 3, 0, 0]),
        ints(&[0, -1, 2, 0]),
        ints(&[-1, 1, 1, 2]),
    ];
    assert!(modules_equal(
        &ModuleSpan::new(4, &basis).unwrap(),
        &ModuleSpan::new(4, &reference).unwrap()
    )
    .unwrap());
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|k| k["pass"] == true));
    assert!(v["checks"][0]["paper_ref"]
        .as_str()
        .is_some_and(|s| !s.is_empty()));
}

#[test]
fn solve_with_other_pivot() {
    let (v, out) = json(&["solve", "12", "4", "2", "3", "--pivot", "4"]);
    assert!(out.status.success());
    assert_eq!(v["pivot"], 4);
    assert!(v["det"] == "3" || v["det"] == "-3");
    let out = dioph(&["solve", "0", "1", "1", "--pivot", "1"]);
    assert!(!out.status.success());
}

#[test]
fn structure_worked_example() {
    let (v, out) = json(&["structure", "12", "4", "2", "3", "--i", "1"]);
    assert!(out.status.success());
    let q = &v["quotients"];
    assert_eq!(
        q["S_mod_Si"][0]["invariant_factors"],
        serde_json::json!(["12", "12"])
    );
    assert_eq!(q["S_mod_Ui"][0]["elementary"], "Z/2 + Z/3");
    assert_eq!(q["W_mod_S"]["invariant_factors"], serde_json::json!(["12"]));
    assert_eq!(v["d_chain"], serde_json::json!(["3", "2"]));
    assert_eq!(v["c_matrix"]["divisibility"], true);

    let text = dioph(&["structure", "12", "4", "2", "3", "--i", "1"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("S/S_1 = Z/4 + Z/4 + Z/3 + Z/3 = Z/12 + Z/12"));
    assert!(text.contains("S/U_1 = Z/2 + Z/3 = Z/6"));
    assert!(text.contains("W/S = Z/4 + Z/3 = Z/12"));
}

#[test]
fn present_worked_example() {
    let (v, out) = json(&[
        "present",
        "12",
        "4",
        "2",
        "3",
        "--m-strategy",
        "greedy-minimal",
    ]);
    assert!(out.status.success());
    let p = &v["presentation"];
    assert_eq!(
        (p["d"].as_u64(), p["e"].as_u64(), p["rank"].as_u64()),
        (Some(5), Some(2), Some(2))
    );
    assert_eq!(p["snf_diagonal"], serde_json::json!(["1", "1"]));
    assert_eq!(
        int_rows(&p["relation_matrix"]),
        vec![
            ints(&[3, 0]),
            ints(&[-2, 0]),
            ints(&[0, 3]),
            ints(&[0, -2]),
            ints(&[12, 4])
        ]
    );
}

#[test]
fn rejects_bad_input() {
    let out = dioph(&["solve", "2", "4", "6"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unimodular"));
    let out = dioph(&["solve", "3", "x"]);
    assert!(!out.status.success());
    let out = dioph(&["solve", "5"]);
    assert!(!out.status.success());
    let out = dioph(&["structure", "1", "2", "--i", "3"]);
    assert!(!out.status.success());
}

#[test]
fn reads_coefficient_file() {
    let path = temp_file(
        "coeffs.txt",
        b"# the worked example\n12\n4  # second\n\n2\n3\n",
    );
    let (v, out) = json(&["solve", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(v["coefficients"], serde_json::json!(["12", "4", "2", "3"]));
    std::fs::remove_file(path).ok();
}

#[test]
fn negative_and_huge_coefficients() {
    let big = "-1267650600228229401496703205376";
    let (v, out) = json(&["solve", big, "9", "-25", "15"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(v["coefficients"][0], big);
}

#[test]
fn verify_prints_seed_and_is_deterministic() {
    let (a, out) = json(&[
        "verify",
        "--count",
        "5",
        "--seed",
        "99",
        "--max-coeff",
        "500",
    ]);
    assert!(out.status.success());
    assert_eq!(a["seed"], "99");
    assert_eq!(a["instances"].as_array().unwrap().len(), 5);
    let (b, _) = json(&[
        "verify",
        "--count",
        "5",
        "--seed",
        "99",
        "--max-coeff",
        "500",
    ]);
    assert_eq!(a, b);
    let text = String::from_utf8(dioph(&["verify", "--count", "2", "--seed", "7"]).stdout).unwrap();
    assert!(text.starts_with("seed: 7"));
}

#[test]
fn report_round_trips() {
    let (doc, out) = json(&[
        "verify",
        "--count",
        "8",
        "--seed",
        "3",
        "--m-strategy",
        "greedy-minimal",
    ]);
    assert!(out.status.success());
    let path = temp_file("report.json", &out.stdout);
    let (again, out) = json(&["verify", "--report", path.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(outcomes(&doc), outcomes(&again));
    assert_eq!(doc, again);

    let (single, out) = json(&["structure", "12", "4", "2", "3", "--i", "2"]);
    let single_path = temp_file("single.json", &out.stdout);
    let (again, out) = json(&["verify", "--report", single_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(again["instances"][0], single);

    let mut tampered = doc.clone();
    tampered["instances"][0]["basis"][0][0] = Value::String("12345".into());
    let bad_path = temp_file(
        "tampered.json",
        serde_json::to_string(&tampered).unwrap().as_bytes(),
    );
    let out = dioph(&["verify", "--report", bad_path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("certificate"));

    for p in [path, single_path, bad_path] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn example_matches_goldens() {
    let out = dioph(&["example"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("MISMATCH"));
    let (v, out) = json(&["example"]);
    assert!(out.status.success());
    assert_eq!(v["passed"], true);
    assert!(v["displays"].as_array().unwrap().len() >= 20);
}
