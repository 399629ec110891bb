//! Truncated chain complexes of finite-dimensional `Z/p`-vector spaces and
//! chain maps between them.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::algebra::{enumerate_all, Matrix, PrimeField, Vector};
use crate::error::{Error, Result};
use crate::graded::{Finite, Graded, Morphism};

/// A chain complex `X_0 <- X_1 <- ... <- X_N` with `X_i = (Z/p)^{n_i}`.
///
/// `diffs[i - 1]` is `d_i : X_i -> X_{i-1}`, an `n_{i-1} x n_i` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    field: PrimeField,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    /// Builds and validates a complex.
    pub fn new(field: PrimeField, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        let c = Self::from_raw(field, ranks, diffs);
        c.validate()?;
        Ok(c)
    }

    /// Builds without checking shapes or `d^2 = 0`; see [`ChainComplex::validate`].
    pub fn from_raw(field: PrimeField, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Self {
        assert!(!ranks.is_empty(), "a complex has at least dimension 0");
        ChainComplex {
            field,
            ranks,
            diffs,
        }
    }

    /// The zero complex truncated at `trunc`.
    pub fn zero(field: PrimeField, trunc: usize) -> Self {
        Self::from_ranks_zero_diff(field, vec![0; trunc + 1])
    }

    /// Free modules of the given ranks with zero differential.
    pub fn from_ranks_zero_diff(field: PrimeField, ranks: Vec<usize>) -> Self {
        let diffs = (1..ranks.len())
            .map(|i| Matrix::zero(field, ranks[i - 1], ranks[i]))
            .collect();
        ChainComplex {
            field,
            ranks,
            diffs,
        }
    }

    /// `S^rank` concentrated in dimension `dim`.
    pub fn concentrated(field: PrimeField, dim: usize, rank: usize, trunc: usize) -> Self {
        let mut ranks = vec![0; trunc + 1];
        if dim <= trunc {
            ranks[dim] = rank;
        }
        Self::from_ranks_zero_diff(field, ranks)
    }

    /// The cell `2_i`: `S` in dimensions `i` and `i - 1` joined by the identity.
    pub fn disk(field: PrimeField, i: usize, trunc: usize) -> Self {
        let mut c = Self::zero(field, trunc);
        if i <= trunc {
            c.ranks[i] = 1;
        }
        if i >= 1 && i - 1 <= trunc {
            c.ranks[i - 1] = 1;
        }
        for k in 1..=trunc {
            c.diffs[k - 1] = Matrix::zero(field, c.ranks[k - 1], c.ranks[k]);
        }
        if i >= 1 && i <= trunc {
            c.diffs[i - 1] = Matrix::identity(field, 1);
        }
        c
    }

    /// The boundary `∂_i` of the cell `2_i`: `S` in dimension `i - 1`.
    pub fn boundary(field: PrimeField, i: usize, trunc: usize) -> Self {
        if i == 0 {
            Self::zero(field, trunc)
        } else {
            Self::concentrated(field, i - 1, 1, trunc)
        }
    }

    /// A seeded random complex with ranks at most `max_rank` and `d^2 = 0`.
    pub fn random(field: PrimeField, trunc: usize, max_rank: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ranks: Vec<usize> = (0..=trunc).map(|_| rng.gen_range(0..=max_rank)).collect();
        let p = field.p();
        let mut diffs: Vec<Matrix> = Vec::with_capacity(trunc);
        for i in 1..=trunc {
            let (rows, cols) = (ranks[i - 1], ranks[i]);
            let d = if i == 1 {
                let entries = (0..rows * cols)
                    .map(|_| rng.gen_range(0..p) as u64)
                    .collect();
                Matrix::new(field, rows, cols, entries).expect("shape")
            } else {
                // columns drawn from the cycles of the previous differential
                let kernel = diffs[i - 2].kernel_basis();
                let columns: Vec<Vector> = (0..cols)
                    .map(|_| {
                        let coeffs: Vec<u32> = kernel.iter().map(|_| rng.gen_range(0..p)).collect();
                        crate::algebra::linear_combination(field, rows, &kernel, &coeffs)
                    })
                    .collect();
                Matrix::from_columns(field, rows, &columns)
            };
            diffs.push(d);
        }
        ChainComplex {
            field,
            ranks,
            diffs,
        }
    }

    /// `a ⊕ b` together with the inclusions and projections.
    pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> Result<DirectSum> {
        if a.field != b.field {
            return Err(Error::FieldMismatch {
                left: a.field.p(),
                right: b.field.p(),
            });
        }
        if a.trunc() != b.trunc() {
            return Err(Error::ObjectMismatch(
                "summands truncated at different levels".into(),
            ));
        }
        let f = a.field;
        let ranks: Vec<usize> = a.ranks.iter().zip(&b.ranks).map(|(x, y)| x + y).collect();
        let diffs = (1..ranks.len())
            .map(|i| {
                Matrix::block(
                    a.diff_matrix(i),
                    &Matrix::zero(f, a.ranks[i - 1], b.ranks[i]),
                    &Matrix::zero(f, b.ranks[i - 1], a.ranks[i]),
                    b.diff_matrix(i),
                )
            })
            .collect();
        let sum = ChainComplex {
            field: f,
            ranks,
            diffs,
        };
        let dims = 0..=a.trunc();
        let inl = dims
            .clone()
            .map(|i| summand_inclusion(f, a.ranks[i], b.ranks[i], true))
            .collect();
        let inr = dims
            .clone()
            .map(|i| summand_inclusion(f, a.ranks[i], b.ranks[i], false))
            .collect();
        let pl = dims
            .clone()
            .map(|i| summand_projection(f, a.ranks[i], b.ranks[i], true))
            .collect();
        let pr = dims
            .map(|i| summand_projection(f, a.ranks[i], b.ranks[i], false))
            .collect();
        Ok(DirectSum {
            inl: ChainMap::from_raw(a.clone(), sum.clone(), inl),
            inr: ChainMap::from_raw(b.clone(), sum.clone(), inr),
            pl: ChainMap::from_raw(sum.clone(), a.clone(), pl),
            pr: ChainMap::from_raw(sum.clone(), b.clone(), pr),
            sum,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn trunc(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_at(&self, dim: usize) -> usize {
        self.ranks[dim]
    }

    /// `d_i`, for `1 <= i <= trunc`.
    pub fn diff_matrix(&self, i: usize) -> &Matrix {
        &self.diffs[i - 1]
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    /// Checks shapes and `d_i d_{i+1} = 0`, reporting the first failing dimension.
    pub fn validate(&self) -> Result<()> {
        if self.diffs.len() != self.trunc() {
            return Err(Error::ShapeMismatch {
                dim: self.diffs.len().min(self.trunc()) + 1,
            });
        }
        for i in 1..=self.trunc() {
            let d = &self.diffs[i - 1];
            if d.field() != self.field || d.rows() != self.ranks[i - 1] || d.cols() != self.ranks[i]
            {
                return Err(Error::ShapeMismatch { dim: i });
            }
        }
        for i in 1..self.trunc() {
            let dd = self.diffs[i - 1].mul(&self.diffs[i])?;
            if !dd.is_zero() {
                return Err(Error::SquareNotZero(i));
            }
        }
        Ok(())
    }

    pub fn apply_diff(&self, dim: usize, v: &Vector) -> Result<Vector> {
        if dim == 0 {
            return Err(Error::DimensionOutOfRange {
                dim: 0,
                max: self.trunc(),
            });
        }
        self.check_dim(dim)?;
        self.diffs[dim - 1].apply(v)
    }

    /// Basis of the cycles `Z X_i`; in dimension 0 every chain is a cycle.
    pub fn cycles(&self, i: usize) -> Result<Vec<Vector>> {
        self.check_dim(i)?;
        if i == 0 {
            Ok((0..self.ranks[0])
                .map(|k| Vector::unit(self.field, self.ranks[0], k))
                .collect())
        } else {
            Ok(self.diffs[i - 1].kernel_basis())
        }
    }

    pub fn element(&self, dim: usize, vec: Vector) -> Result<DimensionedElement> {
        self.check_elem(dim, &vec)?;
        Ok(DimensionedElement { dim, vec })
    }

    /// All elements in dimension `dim`, lexicographically, under a size guard.
    pub fn elements(&self, dim: usize, limit: usize) -> Result<Vec<Vector>> {
        self.check_dim(dim)?;
        enumerate_all(self.field, self.ranks[dim], limit).map_err(|e| match e {
            Error::SizeGuardExceeded {
                required, limit, ..
            } => Error::SizeGuardExceeded {
                dim,
                required,
                limit,
            },
            other => other,
        })
    }
}

fn summand_inclusion(f: PrimeField, n_a: usize, n_b: usize, first: bool) -> Matrix {
    let (k, offset) = if first { (n_a, 0) } else { (n_b, n_a) };
    let mut m = Matrix::zero(f, n_a + n_b, k);
    for t in 0..k {
        m.set(offset + t, t, 1);
    }
    m
}

fn summand_projection(f: PrimeField, n_a: usize, n_b: usize, first: bool) -> Matrix {
    let (k, offset) = if first { (n_a, 0) } else { (n_b, n_a) };
    let mut m = Matrix::zero(f, k, n_a + n_b);
    for t in 0..k {
        m.set(t, offset + t, 1);
    }
    m
}

/// An element of a complex together with its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimensionedElement {
    pub dim: usize,
    pub vec: Vector,
}

/// A direct sum with its structure maps.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub sum: ChainComplex,
    pub inl: ChainMap,
    pub inr: ChainMap,
    pub pl: ChainMap,
    pub pr: ChainMap,
}

impl Graded for ChainComplex {
    type Elem = Vector;

    fn field(&self) -> PrimeField {
        self.field
    }

    fn top_dim(&self) -> usize {
        self.trunc()
    }

    fn zero(&self, dim: usize) -> Vector {
        Vector::zero(self.field, self.ranks[dim])
    }

    fn add(&self, _dim: usize, a: &Vector, b: &Vector) -> Vector {
        a.add(b).expect("operands of equal shape")
    }

    fn scale(&self, _dim: usize, c: u32, a: &Vector) -> Vector {
        a.scale(c)
    }

    fn is_zero(&self, a: &Vector) -> bool {
        a.is_zero()
    }

    fn diff(&self, dim: usize, e: &Vector) -> Vector {
        self.diffs[dim - 1]
            .apply(e)
            .expect("element of the right length")
    }

    fn check_elem(&self, dim: usize, e: &Vector) -> Result<()> {
        self.check_dim(dim)?;
        if e.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: e.field().p(),
            });
        }
        if e.len() != self.ranks[dim] {
            return Err(Error::DimensionMismatch {
                expected: self.ranks[dim],
                found: e.len(),
            });
        }
        Ok(())
    }

    fn elem_json(&self, _dim: usize, e: &Vector) -> Value {
        Value::from(e.to_u64())
    }

    fn elem_from_json(&self, dim: usize, v: &Value) -> Result<Vector> {
        let vec = vector_from_json(self.field, v)?;
        self.check_elem(dim, &vec)?;
        Ok(vec)
    }

    fn same_object(&self, other: &Self) -> bool {
        self == other
    }
}

impl Finite for ChainComplex {
    fn enumerable_dim(&self) -> Option<usize> {
        Some(self.trunc())
    }

    fn basis(&self, dim: usize) -> Result<Vec<Vector>> {
        self.check_dim(dim)?;
        Ok((0..self.ranks[dim])
            .map(|k| Vector::unit(self.field, self.ranks[dim], k))
            .collect())
    }

    fn coords(&self, dim: usize, e: &Vector) -> Result<Vector> {
        self.check_elem(dim, e)?;
        Ok(e.clone())
    }

    fn cycle_basis(&self, dim: usize) -> Result<Vec<Vector>> {
        self.cycles(dim)
    }
}

/// Parses a JSON array of residues in `[0, p)`.
pub fn vector_from_json(field: PrimeField, v: &Value) -> Result<Vector> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of residues, found {v}")))?;
    let entries = arr
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&n| n < field.p() as u64)
                .ok_or_else(|| Error::Parse(format!("{x} is not a residue mod {}", field.p())))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(Vector::new(field, entries))
}

/// A chain map given by one matrix per dimension, `comps[i] : X_i -> Y_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    comps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, comps: Vec<Matrix>) -> Result<Self> {
        let f = Self::from_raw(source, target, comps);
        f.validate()?;
        Ok(f)
    }

    pub fn from_raw(source: ChainComplex, target: ChainComplex, comps: Vec<Matrix>) -> Self {
        ChainMap {
            source,
            target,
            comps,
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let comps = c
            .ranks
            .iter()
            .map(|&n| Matrix::identity(c.field, n))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            comps,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Result<Self> {
        Self::check_objects(source, target)?;
        let comps = source
            .ranks
            .iter()
            .zip(&target.ranks)
            .map(|(&s, &t)| Matrix::zero(source.field, t, s))
            .collect();
        Ok(ChainMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    fn check_objects(source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        if source.field != target.field {
            return Err(Error::FieldMismatch {
                left: source.field.p(),
                right: target.field.p(),
            });
        }
        if source.trunc() != target.trunc() {
            return Err(Error::ObjectMismatch(
                "source and target truncated at different levels".into(),
            ));
        }
        Ok(())
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn comp(&self, dim: usize) -> &Matrix {
        &self.comps[dim]
    }

    /// Checks shapes and `f_{i-1} d_i = d_i f_i`, reporting the first failure.
    pub fn validate(&self) -> Result<()> {
        Self::check_objects(&self.source, &self.target)?;
        if self.comps.len() != self.source.trunc() + 1 {
            return Err(Error::ShapeMismatch {
                dim: self.comps.len().min(self.source.trunc() + 1),
            });
        }
        for (i, m) in self.comps.iter().enumerate() {
            if m.field() != self.source.field
                || m.rows() != self.target.ranks[i]
                || m.cols() != self.source.ranks[i]
            {
                return Err(Error::ShapeMismatch { dim: i });
            }
        }
        for i in 1..=self.source.trunc() {
            let left = self.comps[i - 1].mul(self.source.diff_matrix(i))?;
            let right = self.target.diff_matrix(i).mul(&self.comps[i])?;
            if left != right {
                return Err(Error::NotChainMap(i));
            }
        }
        Ok(())
    }

    pub fn apply(&self, dim: usize, v: &Vector) -> Result<Vector> {
        self.source.check_dim(dim)?;
        self.comps[dim].apply(v)
    }

    /// `self . other`, i.e. first `other` then `self`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::ObjectMismatch(
                "target of the inner map is not the source of the outer map".into(),
            ));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(g, f)| g.mul(f))
            .collect::<Result<_>>()?;
        Ok(ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ObjectMismatch(
                "summands have different objects".into(),
            ));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        })
    }

    pub fn to_morphism(&self) -> Morphism<ChainComplex, ChainComplex> {
        let this = self.clone();
        Morphism::new(
            Arc::new(self.source.clone()),
            Arc::new(self.target.clone()),
            move |dim, v| this.apply(dim, v),
        )
    }

    /// Like [`ChainMap::to_morphism`] but reusing shared handles to the objects.
    pub fn to_morphism_between(
        &self,
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
    ) -> Result<Morphism<ChainComplex, ChainComplex>> {
        if *source != self.source || *target != self.target {
            return Err(Error::ObjectMismatch(
                "map does not join the given objects".into(),
            ));
        }
        let this = self.clone();
        Ok(Morphism::new(source, target, move |dim, v| {
            this.apply(dim, v)
        }))
    }
}
