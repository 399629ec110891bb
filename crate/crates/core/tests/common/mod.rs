#![allow(dead_code)]

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use cofibrant::complex::ChainComplex;
use cofibrant::io;
use cofibrant::kleisli::Homomorphism;
use cofibrant::qcomonad::{InitialMorphism, QComplex};
use cofibrant::wfs::twisted_liftings;
use cofibrant::PrimeField;

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// The test corpus: zero complexes, a disk, a boundary, a point and two
/// seeded random complexes, all with ranks at most 2 and truncation at most 3.
pub fn corpus() -> Vec<(&'static str, ChainComplex)> {
    let (f2, f3) = (field(2), field(3));
    vec![
        ("zero_z2", ChainComplex::zero(f2, 3)),
        ("zero_z3", ChainComplex::zero(f3, 2)),
        ("disk1_z2", ChainComplex::disk(f2, 1, 2)),
        ("boundary1_z3", ChainComplex::boundary(f3, 1, 2)),
        ("point_z2", ChainComplex::concentrated(f2, 0, 1, 1)),
        ("random_z2", ChainComplex::random(f2, 3, 2, 2)),
        ("random_z3", ChainComplex::random(f3, 3, 2, 7)),
    ]
}

/// A generator of `QX` as found by the oracle: `x`, the coefficients of `z`
/// over the previous dimension's generators, and the JSON key.
#[derive(Debug, Clone)]
pub struct OracleGen {
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    pub key: Value,
}

fn tuples(p: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..p).map(move |c| {
                    let mut t = t.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

fn mat_vec(p: u32, rows: &[Vec<u64>], v: &[u32]) -> Vec<u32> {
    rows.iter()
        .map(|r| (r.iter().zip(v).map(|(&a, &b)| a * b as u64).sum::<u64>() % p as u64) as u32)
        .collect()
}

fn combo(p: u32, len: usize, vecs: &[&[u32]], coeffs: &[u32]) -> Vec<u32> {
    let mut acc = vec![0u64; len];
    for (v, &c) in vecs.iter().zip(coeffs) {
        for (a, &e) in acc.iter_mut().zip(v.iter()) {
            *a += c as u64 * e as u64;
        }
    }
    acc.into_iter().map(|a| (a % p as u64) as u32).collect()
}

/// Enumerates the defining sets of `QX` directly: all `x ∈ X_0` in
/// dimension 0, then all pairs `(x, z)` with `z` a cycle of the previous
/// dimension (every formal combination is tried) and `ε(z) = d(x)`.
/// Gives up (`None`) when a candidate set exceeds `limit`.
pub fn oracle_q(x: &ChainComplex, upto: usize, limit: usize) -> Option<Vec<Vec<OracleGen>>> {
    let p = x.field().p();
    let mut dims: Vec<Vec<OracleGen>> = Vec::new();
    dims.push(
        tuples(p, x.rank_at(0))
            .into_iter()
            .map(|v| OracleGen {
                key: json!({ "x": v }),
                x: v,
                z: vec![],
            })
            .collect(),
    );
    for i in 1..=upto {
        let prev = &dims[i - 1];
        if (p as f64).powi(prev.len() as i32) > limit as f64 {
            return None;
        }
        let d = x.diff_matrix(i).to_rows();
        let prev_x: Vec<&[u32]> = prev.iter().map(|g| g.x.as_slice()).collect();
        let prev_z: Vec<&[u32]> = prev.iter().map(|g| g.z.as_slice()).collect();
        let prev_prev_len = if i >= 2 { dims[i - 2].len() } else { 0 };
        let mut gens = Vec::new();
        for c in tuples(p, prev.len()) {
            if i >= 2 && combo(p, prev_prev_len, &prev_z, &c).iter().any(|&e| e != 0) {
                continue;
            }
            let eps = combo(p, x.rank_at(i - 1), &prev_x, &c);
            for xv in tuples(p, x.rank_at(i)) {
                if mat_vec(p, &d, &xv) != eps {
                    continue;
                }
                let mut terms: Vec<(String, Value, u32)> = prev
                    .iter()
                    .zip(&c)
                    .filter(|(_, &k)| k != 0)
                    .map(|(g, &k)| (serde_json::to_string(&g.key).unwrap(), g.key.clone(), k))
                    .collect();
                terms.sort_by(|a, b| a.0.cmp(&b.0));
                let z: Vec<Value> = terms.into_iter().map(|(_, k, c)| json!([k, c])).collect();
                gens.push(OracleGen {
                    key: json!({ "x": xv, "z": z }),
                    x: xv,
                    z: c.clone(),
                });
            }
        }
        dims.push(gens);
    }
    Some(dims)
}

/// A homomorphism `X ⇝ D` that is not induced by a strict map: the initial
/// map into the projection `X ⊕ D -> X` with twisted liftings, followed by
/// the projection onto `D`. `D` is `2_1 ⊕ 2_2` (or `2_1` below truncation 2).
pub fn twisted_hom(x: &ChainComplex) -> (Homomorphism, ChainComplex) {
    let f = x.field();
    let mut extra = ChainComplex::disk(f, 1, x.trunc());
    if x.trunc() >= 2 {
        extra = ChainComplex::direct_sum(&extra, &ChainComplex::disk(f, 2, x.trunc()))
            .unwrap()
            .sum;
    }
    let sum = ChainComplex::direct_sum(x, &extra).unwrap();
    let aaf = twisted_liftings(&sum.pl).unwrap();
    let q = QComplex::new(Arc::new(x.clone()));
    let h = InitialMorphism::new(q.clone(), aaf).unwrap();
    let pr = sum.pr.clone();
    let hom = Homomorphism::from_fn(q.clone(), Arc::new(extra.clone()), move |g| {
        let gen = q.generator(g);
        pr.apply(gen.dim(), &h.on_generator(g)?)
    });
    (hom, extra)
}

/// Highest dimension `<= 2` and `<= trunc` in which `QX` materializes under
/// the guard.
pub fn exhaustive_upto(x: &ChainComplex, limit: usize) -> usize {
    let q = QComplex::new(Arc::new(x.clone()));
    (0..=2.min(x.trunc()))
        .rev()
        .find(|&d| q.materialize(d, limit).is_ok())
        .unwrap_or(0)
}

/// Writes `h` as a fixture table and loads it back.
pub fn round_trip_fixture(h: &Homomorphism, upto: usize, limit: usize) -> Homomorphism {
    let v = io::hom_to_json(h, upto, limit).unwrap();
    let (back, stated) = io::hom_from_json(&v, Path::new("."), limit).unwrap();
    assert_eq!(stated, upto);
    back
}
