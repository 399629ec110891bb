mod common;

use std::path::Path;
use std::sync::Arc;

use cofibrant::complex::{ChainComplex, ChainMap};
use cofibrant::graded::Morphism;
use cofibrant::io;
use cofibrant::wfs::{
    all_compatible_pairs, check_square, compose_liftings, linear_liftings, solve_lifting,
    twisted_liftings, validate_aaf, verify_aaf_morphism, LiftingSquare,
};
use cofibrant::{Error, Vector};

use common::{corpus, field};

const LIMIT: usize = 4096;

/// `X ⊕ 2_1 -> X`, the projection.
fn projection(x: &ChainComplex) -> ChainMap {
    let d = ChainComplex::disk(x.field(), 1, x.trunc());
    ChainComplex::direct_sum(x, &d).unwrap().pl
}

fn small_corpus() -> Vec<(&'static str, ChainComplex)> {
    corpus()
        .into_iter()
        .filter(|(name, _)| !name.starts_with("random"))
        .collect()
}

#[test]
fn chosen_lifts_are_among_all_lifts() {
    for (name, x) in small_corpus() {
        let f = projection(&x);
        let y = f.source();
        for aaf in [linear_liftings(&f).unwrap(), twisted_liftings(&f).unwrap()] {
            for dim in 0..=x.trunc() {
                let Ok(pairs) = all_compatible_pairs(aaf.map(), dim, LIMIT) else {
                    continue;
                };
                let Ok(candidates) = y.elements(dim, LIMIT) else {
                    continue;
                };
                for (xe, ze) in pairs {
                    let fillers: Vec<&Vector> = candidates
                        .iter()
                        .filter(|c| f.apply(dim, c).unwrap() == xe)
                        .filter(|c| match &ze {
                            None => true,
                            Some(z) => &y.apply_diff(dim, c).unwrap() == z,
                        })
                        .collect();
                    assert!(!fillers.is_empty(), "{name}: no filler in dim {dim}");
                    let sq = LiftingSquare::new(dim, ze, xe);
                    let chosen = solve_lifting(&aaf, &sq).unwrap();
                    assert!(fillers.contains(&&chosen), "{name}: dim {dim}");
                }
            }
        }
    }
}

#[test]
fn twisted_liftings_are_not_additive() {
    let x = ChainComplex::concentrated(field(3), 0, 1, 1);
    let f = projection(&x);
    let aaf = twisted_liftings(&f).unwrap();
    let one = Vector::new(field(3), [1]);
    let two = Vector::new(field(3), [2]);
    let sum = aaf.k0(&one).unwrap().add(&aaf.k0(&two).unwrap()).unwrap();
    assert_ne!(sum, aaf.k0(&Vector::zero(field(3), 1)).unwrap());
}

#[test]
fn lifting_tables_round_trip() {
    for (name, x) in small_corpus() {
        let f = projection(&x);
        let aaf = twisted_liftings(&f).unwrap();
        let Ok(table) = io::aaf_to_json(&f, &aaf, LIMIT) else {
            continue;
        };
        let (map, back) = io::aaf_from_json(&table, Path::new(".")).unwrap();
        assert_eq!(map, f, "{name}");
        let cov = validate_aaf(&back, LIMIT, 16, 0).unwrap();
        assert!(!cov.is_sampled(), "{name}");
        for dim in 0..=x.trunc() {
            for (xe, ze) in all_compatible_pairs(aaf.map(), dim, LIMIT).unwrap() {
                let sq = LiftingSquare::new(dim, ze, xe);
                assert_eq!(
                    solve_lifting(&back, &sq),
                    solve_lifting(&aaf, &sq),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn lifting_tables_report_missing_squares() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let f = projection(&x);
    let mut table = io::aaf_to_json(&f, &linear_liftings(&f).unwrap(), LIMIT).unwrap();
    table["k0"].as_array_mut().unwrap().clear();
    let (_, aaf) = io::aaf_from_json(&table, Path::new(".")).unwrap();
    assert!(matches!(
        validate_aaf(&aaf, LIMIT, 16, 0),
        Err(Error::Undefined { dim: 0, .. })
    ));
}

#[test]
fn composed_liftings_are_liftings() {
    for (name, x) in small_corpus() {
        let f = projection(&x);
        let g = projection(f.source());
        let composed = compose_liftings(
            &twisted_liftings(&g).unwrap(),
            &twisted_liftings(&f).unwrap(),
        )
        .unwrap();
        let cov = validate_aaf(&composed, LIMIT, 32, 5).unwrap();
        assert!(cov.checked() > 0, "{name}");
    }
}

#[test]
fn broken_choices_are_caught() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let f = projection(&x);
    let y_rank = f.source().rank_at(0);
    let aaf = linear_liftings(&f)
        .unwrap()
        .with_k0(move |_| Ok(Vector::zero(field(2), y_rank)));
    match validate_aaf(&aaf, LIMIT, 16, 0) {
        Err(Error::SectionLawViolated { dim: 0, witness }) => {
            assert_eq!(witness["x"], serde_json::json!([1]))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn morphisms_of_fibrations() {
    let x = ChainComplex::concentrated(field(2), 0, 1, 1);
    let f = projection(&x);
    let linear = linear_liftings(&f).unwrap();
    let twisted = twisted_liftings(&f).unwrap();
    let id = Morphism::identity(linear.source().clone());
    assert!(verify_aaf_morphism(&id, &linear, &linear, LIMIT, 16, 0).is_ok());
    assert!(matches!(
        verify_aaf_morphism(&id, &linear, &twisted, LIMIT, 16, 0),
        Err(Error::LiftingNotPreserved { .. })
    ));
    let zero = ChainMap::zero(f.source(), f.source()).unwrap();
    let zero = zero
        .to_morphism_between(linear.source().clone(), linear.source().clone())
        .unwrap();
    assert!(matches!(
        verify_aaf_morphism(&zero, &linear, &linear, LIMIT, 16, 0),
        Err(Error::NotOverX { .. })
    ));
}

#[test]
fn squares_must_commute() {
    let x = Arc::new(ChainComplex::disk(field(3), 1, 1));
    let id = Morphism::identity(x.clone());
    let one = Vector::new(field(3), [1]);
    let two = Vector::new(field(3), [2]);
    assert!(check_square(&id, &LiftingSquare::new(1, Some(one.clone()), one.clone())).is_ok());
    for sq in [
        LiftingSquare::new(1, Some(two), one.clone()),
        LiftingSquare::new(1, None, one.clone()),
        LiftingSquare::new(0, Some(one.clone()), one.clone()),
    ] {
        assert!(matches!(
            check_square(&id, &sq),
            Err(Error::IncompatibleSquare { .. })
        ));
    }
}

#[test]
fn projections_lift_exactly_when_the_kernel_is_acyclic() {
    let f2 = field(2);
    let f3 = field(3);
    for (x, acyclic) in [
        (ChainComplex::disk(f2, 1, 2), true),
        (ChainComplex::zero(f3, 2), true),
        (ChainComplex::concentrated(f2, 0, 1, 1), false),
        (ChainComplex::boundary(f3, 1, 2), false),
    ] {
        let d = ChainComplex::disk(x.field(), 1, x.trunc());
        let sum = ChainComplex::direct_sum(&x, &d).unwrap();
        assert_eq!(linear_liftings(&sum.pr).is_ok(), acyclic, "{x:?}");
    }
}
