mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

use cofibrant::complex::ChainComplex;
use cofibrant::io;
use cofibrant::wfs::twisted_liftings;

use common::{field, twisted_hom};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cofib(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_cofib"))
        .args(args)
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, report)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

#[test]
fn validate_reports_by_exit_code() {
    let (code, r) = cofib(&["validate", path_str(&fixture("disk1_z2.json"))]);
    assert_eq!((code, &r["kind"]), (0, &json!("complex")));

    let (code, r) = cofib(&["validate", path_str(&fixture("point_identity.json"))]);
    assert_eq!((code, &r["kind"]), (0, &json!("map")));

    let (code, r) = cofib(&["validate", path_str(&fixture("not_a_complex.json"))]);
    assert_eq!(code, 1);
    assert_eq!(r["error"], "SquareNotZero");

    let (code, r) = cofib(&["validate", path_str(&fixture("malformed.json"))]);
    assert_eq!(code, 2);
    assert_eq!(r["error"], "Parse");

    let (code, _) = cofib(&["validate", "/nonexistent/complex.json"]);
    assert_eq!(code, 2);

    let (code, r) = cofib(&[
        "validate",
        path_str(&fixture("zero_z2.json")),
        path_str(&fixture("not_a_complex.json")),
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["results"].as_array().unwrap().len(), 2);
}

#[test]
fn materialize_small_complexes() {
    let (code, r) = cofib(&["q-materialize", path_str(&fixture("point_z2.json"))]);
    assert_eq!(code, 0);
    assert_eq!(r["ranks"], json!([2, 2]));
    assert_eq!(r["generators"][0], json!([{ "x": [0] }, { "x": [1] }]));

    let (code, r) = cofib(&[
        "q-materialize",
        path_str(&fixture("zero_z2.json")),
        "--max-dim",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["ranks"], json!([1, 2]));

    let (code, r) = cofib(&[
        "q-materialize",
        path_str(&fixture("boundary1_z3.json")),
        "--max-elems",
        "5",
    ]);
    assert_eq!(code, 1);
    assert_eq!(r["error"], "SizeGuardExceeded");
}

#[test]
fn laws_pass_and_corruption_is_witnessed() {
    let x = path_str(&fixture("point_z2.json")).to_string();
    let map = path_str(&fixture("point_identity.json")).to_string();
    let (code, r) = cofib(&["q-laws", &x, "--map", &map]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["ok"], true);
    assert!(r["first_failure"].is_null());

    let (code, r) = cofib(&["q-laws", &x, "--debug-corrupt-delta"]);
    assert_eq!(code, 1);
    assert!(r["first_failure"].is_object());
    let coassoc = r["laws"]
        .as_array()
        .unwrap()
        .iter()
        .find(|l| l["law"] == "coassociativity")
        .unwrap();
    assert_eq!(coassoc["passed"], false);
    assert!(coassoc["witness"]["gen"].is_object());
}

#[test]
fn sampled_laws_are_reproducible() {
    let x = path_str(&fixture("boundary1_z3.json")).to_string();
    let args = [
        "q-laws",
        &x,
        "--max-elems",
        "100",
        "--samples",
        "30",
        "--seed",
        "9",
    ];
    let first = Command::new(env!("CARGO_BIN_EXE_cofib"))
        .args(args)
        .output()
        .unwrap();
    let second = Command::new(env!("CARGO_BIN_EXE_cofib"))
        .args(args)
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    let r: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(r["fragment"]["seed"], 9);
    assert_eq!(r["ok"], true);

    let (code, r) = cofib(&["q-laws", &x, "--max-elems", "100", "--strict"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"], "SizeGuardExceeded");
}

#[test]
fn lift_against_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let x = ChainComplex::concentrated(field(3), 0, 1, 1);
    let sum = ChainComplex::direct_sum(&x, &ChainComplex::disk(field(3), 1, 1)).unwrap();
    let aaf = twisted_liftings(&sum.pl).unwrap();
    let table = write(
        dir.path(),
        "aaf.json",
        &io::aaf_to_json(&sum.pl, &aaf, 4096).unwrap(),
    );

    let square = write(
        dir.path(),
        "sq.json",
        &json!({ "i": 0, "z": null, "x": [2] }),
    );
    let (code, r) = cofib(&["lift", path_str(&table), path_str(&square)]);
    assert_eq!(code, 0, "{r}");
    let filler = r["filler"].as_array().unwrap();
    assert_eq!(filler[0], 2);

    let square = write(
        dir.path(),
        "sq1.json",
        &json!({ "i": 1, "z": [1, 0], "x": [] }),
    );
    let (code, r) = cofib(&["lift", path_str(&table), path_str(&square)]);
    assert_eq!(code, 1);
    assert_eq!(r["error"], "IncompatibleSquare");
}

#[test]
fn compose_homomorphism_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let (f, d) = twisted_hom(&x);
    let (g, _) = twisted_hom(&d);
    let fp = write(dir.path(), "f.json", &io::hom_to_json(&f, 1, 4096).unwrap());
    let gp = write(dir.path(), "g.json", &io::hom_to_json(&g, 1, 4096).unwrap());

    let (code, r) = cofib(&["compose-hom", path_str(&fp), path_str(&gp), "--check-assoc"]);
    assert_eq!(code, 0, "{r}");
    for check in [
        "fused_matches_definition",
        "left_unit",
        "right_unit",
        "associativity",
        "associativity_outer",
    ] {
        assert_eq!(r["checks"][check]["equal"], true, "{check}");
    }
    let composite = &r["composite"];
    assert_eq!(composite["upto"], 1);
    let (back, _) = io::hom_from_json(composite, dir.path(), 4096).unwrap();
    assert_eq!(back.codomain().as_ref(), g.codomain().as_ref());

    let (code, r) = cofib(&["compose-hom", path_str(&gp), path_str(&fp)]);
    assert_eq!(code, 1);
    assert_eq!(r["error"], "ObjectMismatch");
}

#[test]
fn soa_step_from_zero() {
    let (code, r) = cofib(&["soa-step", path_str(&fixture("zero_to_point.json"))]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["rho_after_lambda_is_f"], true);
    assert_eq!(r["dim0_agreement_with_q"], true);
    let dim0 = r["ledger"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["dim"] == 0)
        .count();
    assert_eq!(dim0, 2);

    let (code, r) = cofib(&["soa-step", path_str(&fixture("point_identity.json"))]);
    assert_eq!(code, 0);
    assert!(r["dim0_agreement_with_q"].is_null());
}

#[test]
fn info_and_usage() {
    let (code, r) = cofib(&["info"]);
    assert_eq!(code, 0);
    assert_eq!(r["defaults"]["max_elems"], 4096);
    assert_eq!(r["commands"].as_array().unwrap().len(), 7);

    let (code, _) = cofib(&["q-materialize"]);
    assert_eq!(code, 2);
}
