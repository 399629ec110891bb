mod common;

use std::path::Path;
use std::sync::Arc;

use cofibrant::complex::{ChainComplex, ChainMap};
use cofibrant::io;
use cofibrant::kleisli::{compose_hom, compose_hom_via_qq, hom_equal, Homomorphism};
use cofibrant::qcomonad::QComplex;
use cofibrant::Error;

use common::{corpus, exhaustive_upto, field, round_trip_fixture, twisted_hom};

const LIMIT: usize = 4096;

fn small_corpus() -> Vec<(&'static str, ChainComplex)> {
    corpus()
        .into_iter()
        .filter(|(name, _)| !name.starts_with("random"))
        .collect()
}

fn assert_equal(a: &Homomorphism, b: &Homomorphism, upto: usize, what: &str) {
    let eq = hom_equal(a, b, upto, LIMIT, 64, 3, false).unwrap();
    assert!(eq.equal, "{what}: {}", eq.to_json());
}

#[test]
fn strict_maps_compose_like_chain_maps() {
    for (name, x) in small_corpus() {
        let d = ChainComplex::disk(x.field(), 1, x.trunc());
        let sum = ChainComplex::direct_sum(&x, &d).unwrap();
        let qx = QComplex::new(Arc::new(x.clone()));
        let qs = QComplex::new(Arc::new(sum.sum.clone()));
        let f = Homomorphism::from_strict(&sum.inl, qx.clone()).unwrap();
        let g = Homomorphism::from_strict(&sum.pl, qs).unwrap();
        let gf = Homomorphism::from_strict(&sum.pl.compose(&sum.inl).unwrap(), qx.clone()).unwrap();
        let upto = exhaustive_upto(&x, LIMIT);
        assert_equal(&compose_hom(&g, &f).unwrap(), &gf, upto, name);
        assert_equal(&gf, &Homomorphism::identity(qx), upto, name);
    }
}

#[test]
fn identities_are_units() {
    for (name, x) in small_corpus() {
        let (h, d) = twisted_hom(&x);
        let upto = exhaustive_upto(&x, LIMIT);
        let id_x = Homomorphism::identity(h.domain().clone());
        let id_d = Homomorphism::identity(QComplex::new(Arc::new(d)));
        assert_equal(&compose_hom(&h, &id_x).unwrap(), &h, upto, name);
        assert_equal(&compose_hom(&id_d, &h).unwrap(), &h, upto, name);
    }
}

#[test]
fn fused_composite_matches_the_definition() {
    for (name, x) in small_corpus() {
        let (f, d) = twisted_hom(&x);
        let (g, _) = twisted_hom(&d);
        let g = g.rebase(QComplex::new(Arc::new(d))).unwrap();
        let upto = exhaustive_upto(&x, LIMIT).min(1);
        let fused = compose_hom(&g, &f).unwrap();
        let literal = compose_hom_via_qq(&g, &f).unwrap();
        assert_equal(&fused, &literal, upto, name);
    }
}

#[test]
fn composition_is_associative_on_twisted_maps() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let (f, d) = twisted_hom(&x);
    let (g, e) = twisted_hom(&d);
    let (h, _) = twisted_hom(&e);
    let left = compose_hom(&h, &compose_hom(&g, &f).unwrap()).unwrap();
    let right = compose_hom(&compose_hom(&h, &g).unwrap(), &f).unwrap();
    assert_equal(&left, &right, 1, "point");
}

#[test]
fn fixtures_round_trip() {
    for (name, x) in small_corpus() {
        let (h, _) = twisted_hom(&x);
        let upto = exhaustive_upto(&x, LIMIT);
        let back = round_trip_fixture(&h, upto, LIMIT);
        assert_equal(&back, &h, upto, name);
    }
}

#[test]
fn twisted_and_zero_maps_differ_with_a_witness() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let (h, d) = twisted_hom(&x);
    let zero =
        Homomorphism::from_strict(&ChainMap::zero(&x, &d).unwrap(), h.domain().clone()).unwrap();
    let eq = hom_equal(&h, &zero, 1, LIMIT, 0, 0, true).unwrap();
    assert!(!eq.equal);
    let w = eq.witness.unwrap();
    assert_eq!(w["dim"], 0);
    assert_eq!(w["gen"]["x"], serde_json::json!([1]));
}

#[test]
fn tables_must_be_complete_chain_maps() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let (h, _) = twisted_hom(&x);
    let fixture = io::hom_to_json(&h, 1, LIMIT).unwrap();

    let mut missing = fixture.clone();
    missing["values"].as_array_mut().unwrap().pop();
    assert!(matches!(
        io::hom_from_json(&missing, Path::new("."), LIMIT),
        Err(Error::Undefined { dim: 1, .. })
    ));

    let mut broken = fixture.clone();
    let entry = broken["values"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["dim"] == 1)
        .unwrap();
    let first = entry["value"][0].as_u64().unwrap();
    entry["value"][0] = (1 - first).into();
    assert!(matches!(
        io::hom_from_json(&broken, Path::new("."), LIMIT),
        Err(Error::NotChainMap(1))
    ));
}

#[test]
fn mismatched_objects_are_rejected() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let (h, _) = twisted_hom(&x);
    let id = Homomorphism::identity(h.domain().clone());
    assert!(matches!(
        compose_hom(&id, &h),
        Err(Error::ObjectMismatch(_))
    ));
    assert!(matches!(
        hom_equal(&h, &id, 1, LIMIT, 0, 0, true),
        Err(Error::ObjectMismatch(_))
    ));
    let other = QComplex::new(Arc::new(ChainComplex::zero(field(2), 1)));
    assert!(matches!(
        Homomorphism::from_strict(&ChainMap::identity(&x), other),
        Err(Error::ObjectMismatch(_))
    ));
}
