//! One step of the small-object argument for chain maps: every lifting square
//! from `∂_i ↪ 2_i` against `f : X -> Y` is glued onto `X` as a free cell,
//! giving `X --λ--> P --ρ--> Y` with `ρ . λ = f`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{Matrix, Vector};
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::qcomonad::QComplex;
use crate::wfs::{all_compatible_pairs, LiftingSquare};

/// All lifting squares against `f` in dimension `i`, ordered by their
/// serialized `(z, x)`. In dimension 0 these are the elements of `Y_0`.
pub fn enumerate_squares(
    f: &ChainMap,
    i: usize,
    limit: usize,
) -> Result<Vec<LiftingSquare<Vector, Vector>>> {
    f.validate()?;
    if i > f.target().trunc() {
        return Err(Error::DimensionOutOfRange {
            dim: i,
            max: f.target().trunc(),
        });
    }
    let m = f.to_morphism();
    let mut pairs = all_compatible_pairs(&m, i, limit)?;
    pairs.sort_by(|(x1, z1), (x2, z2)| {
        let key = |z: &Option<Vector>| z.as_ref().map(|v| v.entries().to_vec());
        key(z1)
            .cmp(&key(z2))
            .then_with(|| x1.entries().cmp(x2.entries()))
    });
    Ok(pairs
        .into_iter()
        .map(|(x, z)| LiftingSquare::new(i, z, x))
        .collect())
}

/// A generator attached to `P`, with the square it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// Position of the generator in the basis of `P_dim`.
    pub index: usize,
    pub z: Option<Vector>,
    pub x: Vector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorisation {
    pub lambda: ChainMap,
    pub rho: ChainMap,
    pub cells: Vec<Cell>,
}

impl Factorisation {
    pub fn middle(&self) -> &ChainComplex {
        self.lambda.target()
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "dim": c.dim,
                    "index": c.index,
                    "z": c.z.as_ref().map(Vector::to_u64),
                    "x": c.x.to_u64(),
                })
            })
            .collect();
        json!({
            "lambda": crate::io::map_to_json(&self.lambda),
            "rho": crate::io::map_to_json(&self.rho),
            "ledger": cells,
        })
    }
}

/// `P_i = X_i ⊕ S^{squares in dimension i}`, the new basis vectors placed
/// after those of `X_i`.
pub fn one_step(f: &ChainMap, limit: usize) -> Result<Factorisation> {
    f.validate()?;
    let (x, y) = (f.source(), f.target());
    let field = x.field();
    let trunc = x.trunc();
    let squares: Vec<Vec<LiftingSquare<Vector, Vector>>> = (0..=trunc)
        .map(|i| enumerate_squares(f, i, limit))
        .collect::<Result<_>>()?;
    let ranks: Vec<usize> = (0..=trunc)
        .map(|i| x.rank_at(i) + squares[i].len())
        .collect();

    let mut diffs = Vec::with_capacity(trunc);
    for i in 1..=trunc {
        let (xr, xr_prev) = (x.rank_at(i), x.rank_at(i - 1));
        let attach: Vec<Vector> = squares[i]
            .iter()
            .map(|sq| sq.top.clone().expect("positive dimension"))
            .collect();
        let top = Matrix::block(
            x.diff_matrix(i),
            &Matrix::from_columns(field, xr_prev, &attach),
            &Matrix::zero(field, squares[i - 1].len(), xr),
            &Matrix::zero(field, squares[i - 1].len(), attach.len()),
        );
        diffs.push(top);
    }
    let p = ChainComplex::new(field, ranks.clone(), diffs)?;

    let mut lambda = Vec::with_capacity(trunc + 1);
    let mut rho = Vec::with_capacity(trunc + 1);
    for (i, sqs) in squares.iter().enumerate() {
        let xr = x.rank_at(i);
        let s = sqs.len();
        lambda.push(Matrix::block(
            &Matrix::identity(field, xr),
            &Matrix::zero(field, xr, 0),
            &Matrix::zero(field, s, xr),
            &Matrix::zero(field, s, 0),
        ));
        let bottoms: Vec<Vector> = sqs.iter().map(|sq| sq.bottom.clone()).collect();
        rho.push(Matrix::block(
            f.comp(i),
            &Matrix::from_columns(field, y.rank_at(i), &bottoms),
            &Matrix::zero(field, 0, xr),
            &Matrix::zero(field, 0, s),
        ));
    }
    let lambda = ChainMap::new(x.clone(), p.clone(), lambda)?;
    let rho = ChainMap::new(p, y.clone(), rho)?;

    let cells = squares
        .into_iter()
        .enumerate()
        .flat_map(|(i, sqs)| {
            let base = x.rank_at(i);
            sqs.into_iter().enumerate().map(move |(k, sq)| Cell {
                dim: i,
                index: base + k,
                z: sq.top,
                x: sq.bottom,
            })
        })
        .collect();
    Ok(Factorisation { lambda, rho, cells })
}

/// For `f : 0 -> Y`, matches the dimension-0 cells of `P` with the
/// generators of `(QY)_0` and checks that `ρ` and `ε` agree under the match.
pub fn dim0_agreement_with_q(fac: &Factorisation, limit: usize) -> Result<bool> {
    let y = fac.rho.target().clone();
    if fac.lambda.source().rank_at(0) != 0 {
        return Err(Error::ObjectMismatch(
            "source is not zero in dimension 0".into(),
        ));
    }
    let q = QComplex::new(Arc::new(y.clone()));
    let m = q.materialize(0, limit)?;
    let cells: Vec<&Cell> = fac.cells.iter().filter(|c| c.dim == 0).collect();
    if cells.len() != m.generators[0].len() || fac.middle().rank_at(0) != cells.len() {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::new();
    for c in cells {
        let g = q.gen0(&c.x)?;
        if !seen.insert(g) {
            return Ok(false);
        }
        let rho_col = fac.rho.comp(0).column(c.index);
        let eps_col = m.epsilon[0].column(g_position(&m.generators[0], g)?);
        if rho_col != eps_col {
            return Ok(false);
        }
    }
    Ok(seen.len() == m.generators[0].len())
}

fn g_position(gens: &[crate::qcomonad::GenId], g: crate::qcomonad::GenId) -> Result<usize> {
    gens.iter()
        .position(|&h| h == g)
        .ok_or(Error::NotMaterialized { dim: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn squares_from_zero_in_dimension_zero() {
        let x = ChainComplex::concentrated(f2(), 0, 1, 1);
        let f = ChainMap::zero(&ChainComplex::zero(f2(), 1), &x).unwrap();
        let sq = enumerate_squares(&f, 0, 4096).unwrap();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[0].bottom, Vector::new(f2(), [0]));
        assert_eq!(sq[1].bottom, Vector::new(f2(), [1]));
        let sq1 = enumerate_squares(&f, 1, 4096).unwrap();
        assert_eq!(sq1.len(), 1);
        assert_eq!(sq1[0].top, Some(Vector::zero(f2(), 0)));
    }

    #[test]
    fn identity_on_zero_complex() {
        let z = ChainComplex::zero(f2(), 0);
        let fac = one_step(&ChainMap::identity(&z), 4096).unwrap();
        assert_eq!(fac.middle().ranks(), &[1]);
        assert!(fac.rho.comp(0).is_zero());
        assert_eq!(
            fac.rho.compose(&fac.lambda).unwrap(),
            ChainMap::identity(&z)
        );
    }

    #[test]
    fn zero_map_agrees_with_q() {
        let x = ChainComplex::concentrated(f2(), 0, 1, 1);
        let f = ChainMap::zero(&ChainComplex::zero(f2(), 1), &x).unwrap();
        let fac = one_step(&f, 4096).unwrap();
        assert_eq!(fac.middle().rank_at(0), 2);
        assert!(dim0_agreement_with_q(&fac, 4096).unwrap());
    }

    #[test]
    fn guard_applies() {
        let x = ChainComplex::concentrated(f2(), 0, 3, 0);
        let f = ChainMap::identity(&x);
        assert!(matches!(
            one_step(&f, 4),
            Err(Error::SizeGuardExceeded { dim: 0, .. })
        ));
    }
}
