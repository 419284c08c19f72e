use std::process::{Command, Output};

use quatfact::{EichlerOrder, Mat2};
use quatfact_cli::config::RunConfig;
use quatfact_cli::verify::{self, eichler::check_canonical_table};
use serde_json::Value;

fn quatfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatfact"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn atoms_of_norm_valuation_one() {
    let out = quatfact(&["atoms", "--prime", "3", "--level", "2", "--max-norm-val", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 6);
    let csv = quatfact(&["atoms", "--prime", "3", "--level", "2", "--max-norm-val", "1", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 7);
}

#[test]
fn atoms_rejects_hereditary_level_and_composite_prime() {
    let out = quatfact(&["atoms", "--prime", "3", "--level", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("hereditary"));
    assert!(out.stdout.is_empty());
    let out = quatfact(&["atoms", "--prime", "4", "--level", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a prime"));
}

#[test]
fn factor_min_delta_witness() {
    let out = quatfact(&["factor", "3,9,3,18", "--prime", "3", "--level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["profile"]["lengths"], serde_json::json!([2, 3]));
    assert_eq!(v["profile"]["delta"], serde_json::json!([1]));
    assert_eq!(v["profile"]["elasticity"], "3/2");
    assert_eq!(v["norm_valuation"], 3);
}

#[test]
fn factor_emits_dot() {
    let out = quatfact(&["factor", "3,9,3,18", "--prime", "3", "--level", "2", "--emit-dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph factorizations {"));
    assert!(dot.contains(" -- "));
}

#[test]
fn factor_rejects_units_zero_divisors_and_bad_input() {
    let unit = quatfact(&["factor", "1,0,0,1"]);
    assert_eq!(unit.status.code(), Some(2));
    assert!(stderr(&unit).contains("unit"));
    let singular = quatfact(&["factor", "3,9,1,3"]);
    assert_eq!(singular.status.code(), Some(2));
    assert!(stderr(&singular).contains("zero divisor"));
    let outside = quatfact(&["factor", "3,1,3,18"]);
    assert_eq!(outside.status.code(), Some(2));
    let garbage = quatfact(&["factor", "3,x,3,18"]);
    assert_eq!(garbage.status.code(), Some(3));
}

#[test]
fn factor_overflow_has_its_own_exit_code() {
    let out = quatfact(&["factor", "27,0,0,27", "--prime", "3", "--level", "2", "--max-count", "10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn clifford_finds_nilpotent() {
    let out = quatfact(&["clifford", "--prime", "3", "--form", "1,1,-9,0,0,0", "--find-nilpotent"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nilpotent"]["z"]["display"], "j - 3k");
    assert_eq!(v["nilpotent"]["norm"], "0");
    for (i, entry) in v["nilpotent"]["long_atoms"].as_array().unwrap().iter().enumerate() {
        let k = i as i64 + 2;
        assert_eq!(entry["k"], k);
        assert_eq!(entry["norm_valuation"], 2 * k);
        assert_eq!(entry["status"], "atom");
    }
}

#[test]
fn clifford_diagonal_form_at_two() {
    let out = quatfact(&["clifford", "--prime", "2", "--form", "1,1,1,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["classification"]["case"], "1b-i");
    assert_eq!(v["classification"]["agrees_with_computation"], true);
    assert_eq!(v["nilpotency_index"], 3);
}

#[test]
fn clifford_rejects_degenerate_form() {
    let out = quatfact(&["clifford", "--prime", "3", "--form", "0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--seed", "7", "--samples", "3", "--only", "2,3,9,12"];
    let a = quatfact(&args);
    let b = quatfact(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = quatfact(&["verify", "--seed", "8", "--samples", "3", "--only", "2,3,9,12"]);
    assert_ne!(a.stdout, c.stdout);
    let v = json(&a);
    let ids: Vec<u64> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [2, 3, 9, 12]);
}

#[test]
fn verify_rejects_unknown_check() {
    assert_eq!(quatfact(&["verify", "--only", "13"]).status.code(), Some(3));
}

#[test]
fn corrupted_atom_table_is_caught() {
    let r = EichlerOrder::new(3, 2).unwrap();
    let table = r.enumerate_atoms(2).unwrap();
    let atoms: Vec<Mat2> = table.iter().map(|a| a.matrix.clone()).collect();
    assert!(check_canonical_table(&r, &table, &atoms, 2).pass());

    // Dropping a representative leaves its atom without a match.
    let mut missing = table.clone();
    let dropped = missing.remove(3);
    let out = check_canonical_table(&r, &missing, &atoms, 2);
    assert_eq!(out.counterexample.as_ref().unwrap()["at"]["element"], serde_json::to_value(&dropped.matrix).unwrap());

    // A right associate added as a second representative.
    let mut doubled = table.clone();
    let mut extra = table[0].clone();
    extra.matrix = &extra.matrix * &Mat2::from_ints(1, 0, 1, 1);
    doubled.push(extra);
    let out = check_canonical_table(&r, &doubled, &atoms, 2);
    assert!(!out.pass());
    assert!(out.counterexample.unwrap()["matching_representatives"].as_array().unwrap().len() == 2);
}

#[test]
fn run_returns_requested_checks_in_order() {
    let config = RunConfig {
        samples: Some(2),
        checks: vec![1, 7],
        ..RunConfig::default()
    };
    let report = verify::run(&config);
    assert!(report.pass);
    assert_eq!(report.checks.len(), 2);
    assert!(report.checks.iter().all(|c| c.counterexample.is_none() && c.instances > 0));
}
