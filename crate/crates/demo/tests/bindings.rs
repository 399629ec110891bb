use serde_json::Value;

use cofibrant_demo::{check_laws, materialize_q, soa_from_zero};

const POINT: &str = r#"{"p": 2, "trunc": 1, "ranks": [1, 0], "diffs": [[[]]]}"#;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn point_materializes() {
    let r = parse(materialize_q(POINT, 2));
    assert_eq!(r["ok"], true);
    assert_eq!(r["ranks"], serde_json::json!([2, 2]));
}

#[test]
fn laws_and_corruption() {
    assert_eq!(parse(check_laws(POINT, 0, false))["ok"], true);
    assert_eq!(parse(check_laws(POINT, 0, true))["ok"], false);
}

#[test]
fn soa_matches_q() {
    let r = parse(soa_from_zero(POINT));
    assert_eq!(r["dim0_agreement_with_q"], true);
    assert_eq!(r["ranks"][0], 2);
}

#[test]
fn errors_are_reported_not_thrown() {
    let r = parse(materialize_q("{\"p\": 4", 1));
    assert_eq!(r["ok"], false);
    assert_eq!(r["error"], "Parse");
    let r = parse(materialize_q(
        r#"{"p": 4, "trunc": 0, "ranks": [1], "diffs": []}"#,
        1,
    ));
    assert_eq!(r["error"], "NotPrime");
}
