//! Lifting problems against the generating cofibrations `∂_i ↪ 2_i`.
//!
//! A map `∂_i -> Y` is a cycle of `Y_{i-1}` (nothing when `i = 0`), and a map
//! `2_i -> X` is an element of `X_i`. A square against `f : Y -> X` is thus a
//! pair `(x, z)` with `d(x) = f(z)`, and a filler is some `y` in `Y_i` with
//! `f(y) = x` and `d(y) = z`. A choice of liftings picks such a `y` for every
//! compatible pair.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{enumerate_affine, Matrix, Vector};
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Count, Error, Result};
use crate::graded::{Finite, Graded, Morphism};

type Lift0<Y, X> = dyn Fn(&<X as Graded>::Elem) -> Result<<Y as Graded>::Elem> + Send + Sync;
type LiftN<Y, X> = dyn Fn(usize, &<X as Graded>::Elem, &<Y as Graded>::Elem) -> Result<<Y as Graded>::Elem>
    + Send
    + Sync;

/// A map `f : Y -> X` together with chosen fillers: `k0(x)` in dimension 0 and
/// `k(i, x, z)` for compatible pairs in dimension `i >= 1`.
pub struct ChoiceOfLiftings<Y: Graded, X: Graded> {
    map: Morphism<Y, X>,
    k0: Arc<Lift0<Y, X>>,
    k: Arc<LiftN<Y, X>>,
}

impl<Y: Graded, X: Graded> Clone for ChoiceOfLiftings<Y, X> {
    fn clone(&self) -> Self {
        ChoiceOfLiftings {
            map: self.map.clone(),
            k0: self.k0.clone(),
            k: self.k.clone(),
        }
    }
}

impl<Y: Graded, X: Graded> ChoiceOfLiftings<Y, X> {
    pub fn new(
        map: Morphism<Y, X>,
        k0: impl Fn(&X::Elem) -> Result<Y::Elem> + Send + Sync + 'static,
        k: impl Fn(usize, &X::Elem, &Y::Elem) -> Result<Y::Elem> + Send + Sync + 'static,
    ) -> Self {
        ChoiceOfLiftings {
            map,
            k0: Arc::new(k0),
            k: Arc::new(k),
        }
    }

    pub fn map(&self) -> &Morphism<Y, X> {
        &self.map
    }

    pub fn source(&self) -> &Arc<Y> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<X> {
        self.map.target()
    }

    /// The raw choice in dimension 0, unchecked.
    pub fn k0(&self, x: &X::Elem) -> Result<Y::Elem> {
        (self.k0)(x)
    }

    /// The raw choice in dimension `dim >= 1`, unchecked.
    pub fn k(&self, dim: usize, x: &X::Elem, z: &Y::Elem) -> Result<Y::Elem> {
        (self.k)(dim, x, z)
    }

    /// Replaces the dimension-0 choice.
    pub fn with_k0(
        &self,
        k0: impl Fn(&X::Elem) -> Result<Y::Elem> + Send + Sync + 'static,
    ) -> Self {
        ChoiceOfLiftings {
            map: self.map.clone(),
            k0: Arc::new(k0),
            k: self.k.clone(),
        }
    }

    /// Replaces the choice in positive dimensions.
    pub fn with_k(
        &self,
        k: impl Fn(usize, &X::Elem, &Y::Elem) -> Result<Y::Elem> + Send + Sync + 'static,
    ) -> Self {
        ChoiceOfLiftings {
            map: self.map.clone(),
            k0: self.k0.clone(),
            k: Arc::new(k),
        }
    }
}

impl<X: Graded> ChoiceOfLiftings<X, X> {
    /// The identity with its only possible liftings, `k(x, z) = x`.
    pub fn identity(object: Arc<X>) -> Self {
        ChoiceOfLiftings::new(
            Morphism::identity(object),
            |x| Ok(x.clone()),
            |_, x, _| Ok(x.clone()),
        )
    }
}

/// A lifting problem against `∂_dim ↪ 2_dim`: `top` is the cycle `z` (absent
/// in dimension 0), `bottom` the element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingSquare<Y, X> {
    pub dim: usize,
    pub top: Option<Y>,
    pub bottom: X,
}

impl<Y: Clone, X: Clone> LiftingSquare<Y, X> {
    pub fn new(dim: usize, top: Option<Y>, bottom: X) -> Self {
        LiftingSquare { dim, top, bottom }
    }
}

/// Checks that a square against `f` commutes: `z` is a cycle and `d(x) = f(z)`.
pub fn check_square<Y: Graded, X: Graded>(
    f: &Morphism<Y, X>,
    sq: &LiftingSquare<Y::Elem, X::Elem>,
) -> Result<()> {
    let incompatible = Error::IncompatibleSquare { dim: sq.dim };
    f.target()
        .check_elem(sq.dim, &sq.bottom)
        .map_err(|_| incompatible.clone())?;
    match (&sq.top, sq.dim) {
        (None, 0) => Ok(()),
        (Some(z), d) if d >= 1 => {
            f.source()
                .check_elem(d - 1, z)
                .map_err(|_| incompatible.clone())?;
            if !f.source().is_cycle(d - 1, z) {
                return Err(incompatible);
            }
            let fz = f.apply(d - 1, z)?;
            if f.target().diff(d, &sq.bottom) != fz {
                return Err(incompatible);
            }
            Ok(())
        }
        _ => Err(incompatible),
    }
}

/// Fills a commuting square with the chosen lifting and verifies both triangles.
pub fn solve_lifting<Y: Graded, X: Graded>(
    aaf: &ChoiceOfLiftings<Y, X>,
    sq: &LiftingSquare<Y::Elem, X::Elem>,
) -> Result<Y::Elem> {
    check_square(aaf.map(), sq)?;
    let y = match &sq.top {
        None => aaf.k0(&sq.bottom)?,
        Some(z) => aaf.k(sq.dim, &sq.bottom, z)?,
    };
    let source = aaf.source();
    let violated = || Error::SectionLawViolated {
        dim: sq.dim,
        witness: square_json(source.as_ref(), aaf.target().as_ref(), sq),
    };
    if source.check_elem(sq.dim, &y).is_err() || aaf.map().apply(sq.dim, &y)? != sq.bottom {
        return Err(violated());
    }
    if let Some(z) = &sq.top {
        if &source.diff(sq.dim, &y) != z {
            return Err(violated());
        }
    }
    Ok(y)
}

/// `{"i": dim, "z": .. | null, "x": ..}`.
pub fn square_json<Y: Graded, X: Graded>(
    y: &Y,
    x: &X,
    sq: &LiftingSquare<Y::Elem, X::Elem>,
) -> Value {
    json!({
        "i": sq.dim,
        "z": sq.top.as_ref().map(|z| y.elem_json(sq.dim - 1, z)),
        "x": x.elem_json(sq.dim, &sq.bottom),
    })
}

/// Liftings for the composite `g . f` from liftings `phi` of `f : C -> D` and
/// `psi` of `g : D -> E`: lift `x` against `g` with top `f(z)`, then lift the
/// result against `f` with top `z`.
pub fn compose_liftings<C: Graded, D: Graded, E: Graded>(
    phi: &ChoiceOfLiftings<C, D>,
    psi: &ChoiceOfLiftings<D, E>,
) -> Result<ChoiceOfLiftings<C, E>> {
    let map = phi.map().then(psi.map())?;
    let (phi0, psi0) = (phi.clone(), psi.clone());
    let (phi1, psi1) = (phi.clone(), psi.clone());
    Ok(ChoiceOfLiftings::new(
        map,
        move |x| phi0.k0(&psi0.k0(x)?),
        move |dim, x, z| {
            let fz = phi1.map().apply(dim - 1, z)?;
            let mid = psi1.k(dim, x, &fz)?;
            phi1.k(dim, &mid, z)
        },
    ))
}

/// How much of a finite check was exhaustive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimCoverage {
    pub dim: usize,
    pub checked: usize,
    pub sampled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub dims: Vec<DimCoverage>,
    pub seed: u64,
}

impl Coverage {
    pub fn is_sampled(&self) -> bool {
        self.dims.iter().any(|d| d.sampled)
    }

    pub fn checked(&self) -> usize {
        self.dims.iter().map(|d| d.checked).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": if self.is_sampled() { "sampled" } else { "exhaustive" },
            "seed": if self.is_sampled() { Some(self.seed) } else { None },
            "dims": self.dims,
        })
    }
}

/// Dimensions in which all compatible pairs for `f : Y -> X` can be listed:
/// `X` must be enumerable in `i` and `Y` in `i - 1`.
fn checkable_dims<Y: Finite, X: Finite>(y: &Y, x: &X) -> Vec<usize> {
    let top = y.top_dim().min(x.top_dim());
    let by_y = y.enumerable_dim().map_or(0, |d| d + 1);
    match x.enumerable_dim() {
        None => Vec::new(),
        Some(bx) => (0..=top.min(bx).min(by_y)).collect(),
    }
}

/// Compatible pairs `(x, z)` for a map `Y -> X`.
pub type Pairs<Y, X> = Vec<(<X as Graded>::Elem, Option<<Y as Graded>::Elem>)>;

/// The compatible pairs `(x, z)` of `f` in dimension `dim`, all of them if
/// there are at most `limit`, otherwise `samples` seeded random ones.
pub fn compatible_pairs<Y: Finite, X: Finite>(
    f: &Morphism<Y, X>,
    dim: usize,
    limit: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Pairs<Y, X>, bool)> {
    let (xb, zb, space) = pair_space(f, dim)?;
    let field = f.target().field();
    let p = field.p();
    let n = xb.len() + zb.len();
    let count = Count::pow(p as u64, space.len());
    let sampled = count.exceeds(limit);
    let coeffs: Vec<Vector> = if sampled {
        (0..samples)
            .map(|_| {
                let c: Vec<u32> = space.iter().map(|_| rng.gen_range(0..p)).collect();
                crate::algebra::linear_combination(field, n, &space, &c)
            })
            .collect()
    } else {
        enumerate_affine(field, &space, &Vector::zero(field, n), limit)?
    };
    Ok((pairs_from_coords(f, dim, &xb, &zb, &coeffs), sampled))
}

/// Every compatible pair of `f` in dimension `dim`, failing with
/// `SizeGuardExceeded` when there are more than `limit`.
pub fn all_compatible_pairs<Y: Finite, X: Finite>(
    f: &Morphism<Y, X>,
    dim: usize,
    limit: usize,
) -> Result<Pairs<Y, X>> {
    let (xb, zb, space) = pair_space(f, dim)?;
    let field = f.target().field();
    let count = Count::pow(field.p() as u64, space.len());
    if count.exceeds(limit) {
        return Err(Error::SizeGuardExceeded {
            dim,
            required: count,
            limit,
        });
    }
    let n = xb.len() + zb.len();
    let coeffs = enumerate_affine(field, &space, &Vector::zero(field, n), limit)?;
    Ok(pairs_from_coords(f, dim, &xb, &zb, &coeffs))
}

fn pairs_from_coords<Y: Finite, X: Finite>(
    f: &Morphism<Y, X>,
    dim: usize,
    xb: &[X::Elem],
    zb: &[Y::Elem],
    coeffs: &[Vector],
) -> Vec<(X::Elem, Option<Y::Elem>)> {
    let (y, x) = (f.source().as_ref(), f.target().as_ref());
    coeffs
        .iter()
        .map(|w| {
            let xe = x.combine(dim, xb, &w.entries()[..xb.len()]);
            let ze = (dim > 0).then(|| y.combine(dim - 1, zb, &w.entries()[xb.len()..]));
            (xe, ze)
        })
        .collect()
}

/// Bases of `X_dim` and `ZY_{dim-1}` together with a basis, in those
/// coordinates, of the space of compatible pairs.
#[allow(clippy::type_complexity)]
fn pair_space<Y: Finite, X: Finite>(
    f: &Morphism<Y, X>,
    dim: usize,
) -> Result<(Vec<X::Elem>, Vec<Y::Elem>, Vec<Vector>)> {
    let (y, x) = (f.source().as_ref(), f.target().as_ref());
    let field = x.field();
    let p = field.p();
    let xb = x.basis(dim)?;
    let (space, zb) = if dim == 0 {
        let n = xb.len();
        let basis: Vec<Vector> = (0..n).map(|k| Vector::unit(field, n, k)).collect();
        (basis, Vec::new())
    } else {
        let zb = y.cycle_basis(dim - 1)?;
        let rows = x.rank(dim - 1)?;
        let dx: Vec<Vector> = xb
            .iter()
            .map(|b| x.coords(dim - 1, &x.diff(dim, b)))
            .collect::<Result<_>>()?;
        let fz: Vec<Vector> = zb
            .iter()
            .map(|z| Ok(x.coords(dim - 1, &f.apply(dim - 1, z)?)?.scale(p - 1)))
            .collect::<Result<_>>()?;
        let m = Matrix::block(
            &Matrix::from_columns(field, rows, &dx),
            &Matrix::from_columns(field, rows, &fz),
            &Matrix::zero(field, 0, dx.len()),
            &Matrix::zero(field, 0, fz.len()),
        );
        (m.kernel_basis(), zb)
    };
    Ok((xb, zb, space))
}

/// Checks the section laws `f(k(x, z)) = x` and `d(k(x, z)) = z` on every
/// compatible pair within the guard, or on a seeded sample beyond it.
pub fn validate_aaf<Y: Finite, X: Finite>(
    aaf: &ChoiceOfLiftings<Y, X>,
    limit: usize,
    samples: usize,
    seed: u64,
) -> Result<Coverage> {
    let mut rng = crate::seeded_rng(seed);
    let mut dims = Vec::new();
    for dim in checkable_dims(aaf.source().as_ref(), aaf.target().as_ref()) {
        let (pairs, sampled) = compatible_pairs(aaf.map(), dim, limit, samples, &mut rng)?;
        for (x, z) in &pairs {
            let sq = LiftingSquare::new(dim, z.clone(), x.clone());
            match solve_lifting(aaf, &sq) {
                Ok(_) => {}
                Err(Error::IncompatibleSquare { .. }) => unreachable!("enumerated pairs commute"),
                Err(e) => return Err(e),
            }
        }
        dims.push(DimCoverage {
            dim,
            checked: pairs.len(),
            sampled,
        });
    }
    Ok(Coverage { dims, seed })
}

/// Checks that `u : Y -> Z` is a morphism of algebraic acyclic fibrations
/// over `X`: `g . u = f`, and `u(φ(x, z)) = ψ(x, u(z))` on compatible pairs.
pub fn verify_aaf_morphism<Y: Finite, Z: Graded, X: Finite>(
    u: &Morphism<Y, Z>,
    src: &ChoiceOfLiftings<Y, X>,
    dst: &ChoiceOfLiftings<Z, X>,
    limit: usize,
    samples: usize,
    seed: u64,
) -> Result<Coverage> {
    if !u.source().same_object(src.source())
        || !u.target().same_object(dst.source())
        || !src.target().same_object(dst.target())
    {
        return Err(Error::ObjectMismatch(
            "map does not join the two fibrations".into(),
        ));
    }
    let (y, z_obj, x) = (
        src.source().as_ref(),
        dst.source().as_ref(),
        src.target().as_ref(),
    );
    let top = y.enumerable_dim().map_or(0, |d| d.min(y.top_dim()));
    if y.enumerable_dim().is_some() {
        for dim in 0..=top {
            for b in y.basis(dim)? {
                if dst.map().apply(dim, &u.apply(dim, &b)?)? != src.map().apply(dim, &b)? {
                    return Err(Error::NotOverX {
                        dim,
                        witness: y.elem_json(dim, &b),
                    });
                }
            }
        }
    }
    let mut rng = crate::seeded_rng(seed);
    let mut dims = Vec::new();
    for dim in checkable_dims(y, x) {
        let (pairs, sampled) = compatible_pairs(src.map(), dim, limit, samples, &mut rng)?;
        for (xe, ze) in &pairs {
            let sq = LiftingSquare::new(dim, ze.clone(), xe.clone());
            let lifted = solve_lifting(src, &sq)?;
            let left = u.apply(dim, &lifted)?;
            let pushed = LiftingSquare::new(
                dim,
                match ze {
                    None => None,
                    Some(z) => Some(u.apply(dim - 1, z)?),
                },
                xe.clone(),
            );
            let right = solve_lifting(dst, &pushed)?;
            if left != right {
                return Err(Error::LiftingNotPreserved {
                    dim,
                    witness: json!({
                        "square": square_json(y, x, &sq),
                        "left": z_obj.elem_json(dim, &left),
                        "right": z_obj.elem_json(dim, &right),
                    }),
                });
            }
        }
        dims.push(DimCoverage {
            dim,
            checked: pairs.len(),
            sampled,
        });
    }
    Ok(Coverage { dims, seed })
}

/// Linear liftings for an acyclic fibration of explicit complexes.
///
/// In each dimension the compatible pairs form the subspace `W` of
/// `X_i ⊕ Y_{i-1}` cut out by `d(z) = 0` and `d(x) = f(z)`; the map
/// `y -> (f y, d y)` lands in `W` and the lifting is the canonical section of
/// it. Fails with `NotSurjective` when `f` is not an acyclic fibration.
pub fn linear_liftings(f: &ChainMap) -> Result<ChoiceOfLiftings<ChainComplex, ChainComplex>> {
    f.validate()?;
    let (y, x) = (f.source(), f.target());
    let field = x.field();
    let p = field.p();
    let s0 = f.comp(0).section_of_surjection()?;
    let mut per_dim: Vec<(Matrix, crate::algebra::Section)> = Vec::new();
    for i in 1..=x.trunc() {
        let (nx, ny_prev, nx_prev) = (x.rank_at(i), y.rank_at(i - 1), x.rank_at(i - 1));
        let minus_f = {
            let cols: Vec<Vector> = (0..ny_prev)
                .map(|k| f.comp(i - 1).column(k).scale(p - 1))
                .collect();
            Matrix::from_columns(field, nx_prev, &cols)
        };
        let (cyc_rows, dy_prev) = if i >= 2 {
            (y.rank_at(i - 2), y.diff_matrix(i - 1).clone())
        } else {
            (0, Matrix::zero(field, 0, ny_prev))
        };
        let constraints = Matrix::block(
            x.diff_matrix(i),
            &minus_f,
            &Matrix::zero(field, cyc_rows, nx),
            &dy_prev,
        );
        let w_basis = constraints.kernel_basis();
        let w = Matrix::from_columns(field, nx + ny_prev, &w_basis);
        let to_w: Vec<Vector> = (0..y.rank_at(i))
            .map(|k| {
                let e = Vector::unit(field, y.rank_at(i), k);
                let pair = f.apply(i, &e)?.concat(&y.apply_diff(i, &e)?);
                w.solve(&pair)?.ok_or(Error::NotChainMap(i))
            })
            .collect::<Result<_>>()?;
        let t = Matrix::from_columns(field, w_basis.len(), &to_w);
        per_dim.push((w, t.section_of_surjection()?));
    }
    let map = f.to_morphism();
    let per_dim = Arc::new(per_dim);
    Ok(ChoiceOfLiftings::new(
        map,
        move |xe| s0.apply(xe),
        move |dim, xe, ze| {
            let (w, s) = &per_dim[dim - 1];
            let coords = w
                .solve(&xe.concat(ze))?
                .ok_or(Error::IncompatibleSquare { dim })?;
            s.apply(&coords)
        },
    ))
}

/// [`linear_liftings`] twisted by a non-linear term: whenever `x` is nonzero,
/// the filler is shifted by a fixed element killed by both `f` and `d`
/// (where one exists). Still a valid choice of liftings, but not additive.
pub fn twisted_liftings(f: &ChainMap) -> Result<ChoiceOfLiftings<ChainComplex, ChainComplex>> {
    let base = linear_liftings(f)?;
    let y = f.source();
    let field = y.field();
    let shifts: Vec<Option<Vector>> = (0..=y.trunc())
        .map(|i| {
            let stacked = if i == 0 {
                f.comp(0).clone()
            } else {
                Matrix::block(
                    f.comp(i),
                    &Matrix::zero(field, f.comp(i).rows(), 0),
                    y.diff_matrix(i),
                    &Matrix::zero(field, y.rank_at(i - 1), 0),
                )
            };
            stacked.kernel_basis().into_iter().next()
        })
        .collect();
    let shifts = Arc::new(shifts);
    let (b0, s0) = (base.clone(), shifts.clone());
    let (b1, s1) = (base.clone(), shifts);
    Ok(base
        .with_k0(move |xe| {
            let y = b0.k0(xe)?;
            match &s0[0] {
                Some(n) if !xe.is_zero() => y.add(n),
                _ => Ok(y),
            }
        })
        .with_k(move |dim, xe, ze| {
            let y = b1.k(dim, xe, ze)?;
            match &s1[dim] {
                Some(n) if !xe.is_zero() => y.add(n),
                _ => Ok(y),
            }
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_lifts_to_x() {
        let x = Arc::new(ChainComplex::random(f(3), 2, 2, 5));
        let aaf = ChoiceOfLiftings::identity(x.clone());
        for dim in 0..=2 {
            let mut rng = crate::seeded_rng(0);
            let (pairs, _) = compatible_pairs(aaf.map(), dim, 4096, 0, &mut rng).unwrap();
            for (xe, ze) in pairs {
                let y = solve_lifting(&aaf, &LiftingSquare::new(dim, ze, xe.clone())).unwrap();
                assert_eq!(y, xe);
            }
        }
    }

    #[test]
    fn incompatible_square_is_rejected() {
        let x = Arc::new(ChainComplex::disk(f(2), 1, 1));
        let aaf = ChoiceOfLiftings::identity(x);
        let sq = LiftingSquare::new(1, Some(Vector::new(f(2), [0])), Vector::new(f(2), [1]));
        assert_eq!(
            solve_lifting(&aaf, &sq),
            Err(Error::IncompatibleSquare { dim: 1 })
        );
        let missing_top = LiftingSquare::new(1, None, Vector::new(f(2), [1]));
        assert_eq!(
            solve_lifting(&aaf, &missing_top),
            Err(Error::IncompatibleSquare { dim: 1 })
        );
    }

    #[test]
    fn broken_k0_is_caught() {
        let x = Arc::new(ChainComplex::concentrated(f(3), 0, 1, 1));
        let aaf = ChoiceOfLiftings::identity(x).with_k0(|xe| Ok(xe.scale(2)));
        match validate_aaf(&aaf, 4096, 0, 0) {
            Err(Error::SectionLawViolated { dim: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn linear_and_twisted_liftings_of_a_projection() {
        let x = ChainComplex::random(f(3), 2, 2, 9);
        let extra = ChainComplex::direct_sum(
            &ChainComplex::disk(f(3), 1, 2),
            &ChainComplex::disk(f(3), 2, 2),
        )
        .unwrap();
        let sum = ChainComplex::direct_sum(&x, &extra.sum).unwrap();
        for aaf in [
            linear_liftings(&sum.pl).unwrap(),
            twisted_liftings(&sum.pl).unwrap(),
        ] {
            let cov = validate_aaf(&aaf, 4096, 0, 1).unwrap();
            assert!(!cov.is_sampled());
            assert_eq!(cov.dims.len(), 3);
        }
    }

    #[test]
    fn non_fibration_has_no_linear_liftings() {
        let x = ChainComplex::concentrated(f(2), 0, 1, 1);
        let zero = ChainComplex::zero(f(2), 1);
        let map = ChainMap::zero(&zero, &x).unwrap();
        assert!(matches!(
            linear_liftings(&map),
            Err(Error::NotSurjective { .. })
        ));
    }

    #[test]
    fn sampled_validation_records_seed() {
        let x = Arc::new(ChainComplex::concentrated(f(3), 0, 2, 1));
        let aaf = ChoiceOfLiftings::identity(x);
        let cov = validate_aaf(&aaf, 4, 4, 77).unwrap();
        assert!(cov.is_sampled());
        assert_eq!(cov.seed, 77);
        assert_eq!(cov.to_json()["mode"], "sampled");
    }
}
