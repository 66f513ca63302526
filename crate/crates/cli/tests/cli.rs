//! End-to-end tests of the command layer: exit codes, JSON reports,
//! witness re-verification and the document fixtures.

use std::path::PathBuf;
use std::process::Command as Proc;

use ultragraph_cli::commands::{run, Command, Property, RunOptions};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn check(property: Property, file: &str) -> ultragraph_cli::report::Report {
    run(
        &Command::Check {
            property,
            file: fixture(file),
        },
        &RunOptions {
            verify_witness: true,
            ..RunOptions::default()
        },
    )
    .unwrap()
}

#[test]
fn chain_simplicity_holds_with_exit_zero() {
    let r = check(Property::Simplicity, "descending_chain.ug");
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.verdict.as_deref(), Some("holds"));
    assert!(r.horizon.is_some());
    let details = r.details.unwrap();
    assert_eq!(details["lattice"]["verdict"], "holds");
    assert_eq!(details["reachability"]["verdict"], "holds");
}

#[test]
fn chain_af_fails_with_verified_witness() {
    let r = check(Property::Af, "descending_chain.ug");
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.verdict.as_deref(), Some("fails"));
    assert_eq!(r.witness_verified, Some(true));
    let w = r.witness.unwrap();
    assert_eq!(w["kind"], "loop");
    assert_eq!(w["edges"][0], "e");
}

#[test]
fn chain_dichotomy_is_purely_infinite() {
    let r = check(Property::Dichotomy, "descending_chain.ug");
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.classification.as_deref(), Some("purely-infinite"));
}

#[test]
fn pair_of_loops_fails_cofinality() {
    let r = check(Property::Cofinality, "pair_of_loops.ug");
    assert_eq!(r.exit_code, 1);
    let w = r.witness.unwrap();
    assert_eq!(w["kind"], "not_cofinal");
    assert_eq!(r.witness_verified, Some(true));
}

#[test]
fn single_edge_is_simple_but_sensitive() {
    let r = check(Property::Simplicity, "single_edge.ug");
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.flags, vec!["reflexivity-sensitive".to_string()]);
}

#[test]
fn compare_matrix_contrasts_the_two_bridges() {
    let r = run(
        &Command::CompareMatrix {
            file: fixture("descending_chain.mat"),
        },
        &RunOptions {
            verify_witness: true,
            ..RunOptions::default()
        },
    )
    .unwrap();
    assert_eq!(r.exit_code, 0);
    let details = r.details.unwrap();
    assert_eq!(details["ultragraph"]["verdict"], "holds");
    assert_eq!(details["graph"]["verdict"], "fails");
    let w = &details["graph"]["witness"];
    assert_eq!(w["kind"], "proper_saturated_hereditary");
    assert_eq!(w["cofinite"], true);
    assert_eq!(w["members"][0], "v0");
}

#[test]
fn ktheory_dense_reports_trivial_groups() {
    let r = run(
        &Command::Ktheory {
            file: fixture("full_2x2.mat"),
            sizes: vec![],
        },
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(r.exit_code, 0);
    let details = r.details.unwrap();
    assert_eq!(details["k0"]["free_rank"], 0);
    assert_eq!(details["k1"]["free_rank"], 0);
    assert_eq!(
        details["k0"]["invariant_factors"].as_array().unwrap().len(),
        0
    );
}

#[test]
fn ktheory_symbolic_stabilizes() {
    let r = run(
        &Command::Ktheory {
            file: fixture("shift_by_three.mat"),
            sizes: vec![12, 24, 36, 48],
        },
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(r.exit_code, 0);
    let details = r.details.unwrap();
    assert_eq!(details["stabilized"], true);
    assert_eq!(details["interior_kernel_rank"], 2);
}

#[test]
fn ideals_enumeration() {
    let r = run(
        &Command::Ideals {
            file: fixture("pair_of_loops.ug"),
        },
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(r.exit_code, 0);
    let details = r.details.unwrap();
    assert_eq!(details["count"], 4);
}

#[test]
fn singular_and_regular_ideal() {
    let r = run(
        &Command::Singular {
            file: fixture("augmented_shift.ug"),
        },
        &RunOptions::default(),
    )
    .unwrap();
    let details = r.details.unwrap();
    assert_eq!(details["cofinite"], false);
    assert_eq!(details["members"], serde_json::json!(["w"]));

    let r = run(
        &Command::RegularIdeal {
            file: fixture("augmented_shift.ug"),
        },
        &RunOptions::default(),
    )
    .unwrap();
    let details = r.details.unwrap();
    assert_eq!(details["cofinite"], true);
    assert_eq!(details["members"], serde_json::json!(["w"]));

    // a graph with a sink violates the precondition
    let err = run(
        &Command::RegularIdeal {
            file: fixture("single_edge.ug"),
        },
        &RunOptions::default(),
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.message().contains("sinks"));
}

#[test]
fn binary_exit_codes_and_json() {
    let bin = env!("CARGO_BIN_EXE_ultra");
    let json_path = std::env::temp_dir().join("ultra_report_test.json");

    let ok = Proc::new(bin)
        .args(["check", "simplicity"])
        .arg(fixture("descending_chain.ug"))
        .args(["--json"])
        .arg(&json_path)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(body["schema"], 1);
    assert_eq!(body["verdict"], "holds");
    assert_eq!(body["exit_code"], 0);

    let fails = Proc::new(bin)
        .args(["check", "af"])
        .arg(fixture("descending_chain.ug"))
        .output()
        .unwrap();
    assert_eq!(fails.status.code(), Some(1));

    // a symbolic matrix whose kernel never stabilizes: inconclusive
    let unstable = std::env::temp_dir().join("ultra_identity.mat");
    std::fs::write(
        &unstable,
        "matrix symbolic\nfirst 0\ntail from 0\nrow n for n >= 0 : { n }\n",
    )
    .unwrap();
    let inconclusive = Proc::new(bin)
        .arg("ktheory")
        .arg(&unstable)
        .args(["--sizes", "8,12"])
        .output()
        .unwrap();
    assert_eq!(inconclusive.status.code(), Some(2));

    let bad = std::env::temp_dir().join("ultra_bad.ug");
    std::fs::write(&bad, "vertices v\nedge e : v -> { }\n").unwrap();
    let input_err = Proc::new(bin)
        .args(["check", "simplicity"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(input_err.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&input_err.stderr);
    assert!(stderr.contains("empty range"), "stderr: {stderr}");
}

#[test]
fn horizon_flag_is_honored() {
    let r = run(
        &Command::Check { property: Property::Simplicity, file: fixture("descending_chain.ug") },
        &RunOptions { horizon: Some(20), ..RunOptions::default() },
    )
    .unwrap();
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.horizon, Some(20));
}

#[test]
fn budget_env_variable_is_honored() {
    let bin = env!("CARGO_BIN_EXE_ultra");
    let out = Proc::new(bin)
        .args(["ideals"])
        .arg(fixture("pair_of_loops.ug"))
        .env("ULTRA_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
