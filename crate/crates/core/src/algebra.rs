//! Exact linear algebra over `Z/p`.
//!
//! Everything here is deterministic: row reduction always takes the leftmost
//! available pivot and free variables are set to zero when solving.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Count, Error, Result};

/// The prime field `Z/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Largest accepted modulus. Products of residues stay well inside `u64`.
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if !(2..=Self::MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by Fermat. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(
            !a.is_multiple_of(self.p),
            "zero has no inverse in Z/{}",
            self.p
        );
        self.pow(a, self.p as u64 - 2)
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn check(self, other: PrimeField) -> Result<()> {
        if self != other {
            return Err(Error::FieldMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A vector of residues over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: PrimeField,
    entries: Vec<u32>,
}

impl Vector {
    /// Builds a vector, reducing every entry mod `p`.
    pub fn new(field: PrimeField, entries: impl IntoIterator<Item = u64>) -> Self {
        let p = field.p as u64;
        Vector {
            field,
            entries: entries.into_iter().map(|e| (e % p) as u32).collect(),
        }
    }

    pub fn from_residues(field: PrimeField, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < field.p));
        Vector { field, entries }
    }

    pub fn zero(field: PrimeField, len: usize) -> Self {
        Vector {
            field,
            entries: vec![0; len],
        }
    }

    pub fn unit(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zero(field, len);
        v.entries[i] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Vector) -> Result<()> {
        self.field.check(other.field)?;
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        let f = self.field;
        Ok(Vector {
            field: f,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check_compatible(other)?;
        let f = self.field;
        Ok(Vector {
            field: f,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Vector {
        let f = self.field;
        Vector {
            field: f,
            entries: self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`, lengths assumed equal.
    fn axpy(&mut self, c: u32, other: &Vector) {
        let f = self.field;
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Vector {
            field: self.field,
            entries,
        }
    }

    pub fn slice(&self, start: usize, end: usize) -> Vector {
        Vector {
            field: self.field,
            entries: self.entries[start..end].to_vec(),
        }
    }

    pub fn to_u64(&self) -> Vec<u64> {
        self.entries.iter().map(|&e| e as u64).collect()
    }
}

/// Sum of `coeffs[i] * vectors[i]`, as a vector of length `len`.
pub fn linear_combination(
    field: PrimeField,
    len: usize,
    vectors: &[Vector],
    coeffs: &[u32],
) -> Vector {
    let mut acc = Vector::zero(field, len);
    for (v, &c) in vectors.iter().zip(coeffs) {
        if c != 0 {
            acc.axpy(c, v);
        }
    }
    acc
}

/// A dense row-major matrix over a prime field. Zero rows or columns are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Matrix {
    /// Row-major construction; entries are reduced mod `p`.
    pub fn new(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let p = field.p as u64;
        Ok(Matrix {
            field,
            rows,
            cols,
            entries: entries.into_iter().map(|e| (e % p) as u32).collect(),
        })
    }

    /// Builds from explicit rows; `cols` is needed when there are no rows.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Matrix::new(field, rows.len(), cols, entries)
    }

    /// The matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vector]) -> Self {
        let cols = columns.len();
        let mut m = Matrix::zero(field, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.entries[i * cols + j] = c.entries[i];
            }
        }
        m
    }

    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            entries: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&e| e as u64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.field.check(v.field)?;
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = self.field;
        let entries = (0..self.rows)
            .map(|i| {
                let acc = self
                    .row(i)
                    .iter()
                    .zip(&v.entries)
                    .fold(0u64, |acc, (&a, &b)| {
                        (acc + a as u64 * b as u64) % f.p as u64
                    });
                acc as u32
            })
            .collect();
        Ok(Vector { field: f, entries })
    }

    /// Product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.field.check(rhs.field)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, rhs.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.field.check(rhs.field)?;
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let f = self.field;
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    /// Block matrix `[[a, b], [c, d]]`, blocks given by shape-compatible pieces.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        debug_assert_eq!(a.rows, b.rows);
        debug_assert_eq!(c.rows, d.rows);
        debug_assert_eq!(a.cols, c.cols);
        debug_assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Matrix::zero(a.field, rows, cols);
        for (blk, r0, c0) in [
            (a, 0, 0),
            (b, 0, a.cols),
            (c, a.rows, 0),
            (d, a.rows, a.cols),
        ] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    m.entries[(r0 + i) * cols + c0 + j] = blk.get(i, j);
                }
            }
        }
        m
    }

    /// Reduced row echelon form with leftmost pivots; returns the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let idx = r * m.cols + j;
                m.entries[idx] = f.mul(m.entries[idx], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let sub = f.mul(factor, m.get(r, j));
                    let idx = i * m.cols + j;
                    m.entries[idx] = f.sub(m.entries[idx], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : m v = 0}`, one vector per free column, read off the RREF.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = Vector::zero(f, self.cols);
                v.entries[free] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v.entries[pc] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Some `v` with `m v = b`: pivot variables by back-substitution, free
    /// variables zero. `Ok(None)` when no solution exists.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        self.field.check(b.field)?;
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let aug = Matrix::block(
            self,
            &Matrix::from_columns(self.field, self.rows, std::slice::from_ref(b)),
            &Matrix::zero(self.field, 0, self.cols),
            &Matrix::zero(self.field, 0, 1),
        );
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut v = Vector::zero(self.field, self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            v.entries[pc] = r.get(row, self.cols);
        }
        Ok(Some(v))
    }

    /// A linear right inverse, built column by column with [`Matrix::solve`].
    pub fn section_of_surjection(&self) -> Result<Section> {
        let rank = self.rank();
        if rank < self.rows {
            return Err(Error::NotSurjective {
                rank,
                rows: self.rows,
            });
        }
        let columns: Vec<Vector> = (0..self.rows)
            .map(|i| {
                self.solve(&Vector::unit(self.field, self.rows, i))
                    .map(|s| s.expect("full row rank"))
            })
            .collect::<Result<_>>()?;
        Ok(Section {
            matrix: Matrix::from_columns(self.field, self.cols, &columns),
        })
    }
}

/// Right inverse `s` of a surjection `m`, so that `m s = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    matrix: Matrix,
}

impl Section {
    pub fn apply(&self, b: &Vector) -> Result<Vector> {
        self.matrix.apply(b)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// All vectors of `offset + span(basis)`, deduplicated, in lexicographic order
/// of the coefficient tuples (first coefficient most significant).
pub fn enumerate_affine(
    field: PrimeField,
    basis: &[Vector],
    offset: &Vector,
    limit: usize,
) -> Result<Vec<Vector>> {
    for b in basis {
        offset.check_compatible(b)?;
    }
    let count = Count::pow(field.p as u64, basis.len());
    if count.exceeds(limit) {
        return Err(Error::SizeGuardExceeded {
            dim: offset.len(),
            required: count,
            limit,
        });
    }
    let mut out = Vec::with_capacity(count.0 as usize);
    let mut seen = HashSet::new();
    for coeffs in CoefficientTuples::new(field, basis.len()) {
        let mut v = offset.clone();
        for (b, &c) in basis.iter().zip(&coeffs) {
            if c != 0 {
                v.axpy(c, b);
            }
        }
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Every element of `(Z/p)^len` in lexicographic order.
pub fn enumerate_all(field: PrimeField, len: usize, limit: usize) -> Result<Vec<Vector>> {
    let count = Count::pow(field.p as u64, len);
    if count.exceeds(limit) {
        return Err(Error::SizeGuardExceeded {
            dim: len,
            required: count,
            limit,
        });
    }
    Ok(CoefficientTuples::new(field, len)
        .map(|c| Vector::from_residues(field, c))
        .collect())
}

/// Lexicographic odometer over `(Z/p)^n`.
pub struct CoefficientTuples {
    p: u32,
    next: Option<Vec<u32>>,
}

impl CoefficientTuples {
    pub fn new(field: PrimeField, n: usize) -> Self {
        CoefficientTuples {
            p: field.p,
            next: Some(vec![0; n]),
        }
    }
}

impl Iterator for CoefficientTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.p {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn v(p: u64, e: &[u64]) -> Vector {
        Vector::new(f(p), e.iter().copied())
    }

    fn m(p: u64, cols: usize, rows: &[&[u64]]) -> Matrix {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(f(p), cols, &rows).unwrap()
    }

    #[test]
    fn rejects_composite_moduli() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses() {
        let fld = f(7);
        for a in 1..7 {
            assert_eq!(fld.mul(a, fld.inv(a)), 1);
        }
    }

    #[test]
    fn mat_apply_examples() {
        let id = Matrix::identity(f(3), 3);
        assert_eq!(id.apply(&v(3, &[1, 0, 2])).unwrap(), v(3, &[1, 0, 2]));
        let z = Matrix::zero(f(2), 0, 2);
        assert_eq!(z.apply(&v(2, &[1, 1])).unwrap(), v(2, &[]));
        assert_eq!(
            m(2, 2, &[&[0, 1]]).apply(&v(2, &[1, 1])).unwrap(),
            v(2, &[1])
        );
    }

    #[test]
    fn mat_apply_errors() {
        let id = Matrix::identity(f(3), 3);
        assert!(matches!(
            id.apply(&v(3, &[1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            id.apply(&v(2, &[1, 0, 1])),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(2, 2, &[&[0, 1]]).kernel_basis(), vec![v(2, &[1, 0])]);
        assert!(Matrix::identity(f(3), 2).kernel_basis().is_empty());
        assert_eq!(
            m(2, 2, &[&[1, 1], &[1, 1]]).kernel_basis(),
            vec![v(2, &[1, 1])]
        );
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            Matrix::identity(f(3), 2).solve(&v(3, &[1, 2])).unwrap(),
            Some(v(3, &[1, 2]))
        );
        assert_eq!(
            m(2, 2, &[&[0, 1]]).solve(&v(2, &[1])).unwrap(),
            Some(v(2, &[0, 1]))
        );
        assert_eq!(Matrix::zero(f(2), 1, 1).solve(&v(2, &[1])).unwrap(), None);
    }

    #[test]
    fn section_examples() {
        let s = Matrix::identity(f(2), 2).section_of_surjection().unwrap();
        assert_eq!(s.matrix(), &Matrix::identity(f(2), 2));
        let s = m(2, 2, &[&[0, 1]]).section_of_surjection().unwrap();
        assert_eq!(s.apply(&v(2, &[1])).unwrap(), v(2, &[0, 1]));
        assert_eq!(
            m(2, 2, &[&[1, 0], &[0, 0]]).section_of_surjection(),
            Err(Error::NotSurjective { rank: 1, rows: 2 })
        );
    }

    #[test]
    fn affine_examples() {
        let fld = f(2);
        assert_eq!(
            enumerate_affine(fld, &[], &v(2, &[1, 0]), 10).unwrap(),
            vec![v(2, &[1, 0])]
        );
        assert_eq!(
            enumerate_affine(fld, &[v(2, &[1, 0])], &v(2, &[0, 1]), 10).unwrap(),
            vec![v(2, &[0, 1]), v(2, &[1, 1])]
        );
        let basis: Vec<Vector> = (0..20).map(|i| Vector::unit(fld, 20, i)).collect();
        assert!(matches!(
            enumerate_affine(fld, &basis, &Vector::zero(fld, 20), 4096),
            Err(Error::SizeGuardExceeded { .. })
        ));
    }

    #[test]
    fn affine_deduplicates_dependent_spans() {
        let fld = f(3);
        let b = v(3, &[1, 2]);
        let out = enumerate_affine(fld, &[b.clone(), b.scale(2)], &v(3, &[0, 0]), 100).unwrap();
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn odometer_is_lexicographic() {
        let tuples: Vec<_> = CoefficientTuples::new(f(3), 2).collect();
        assert_eq!(tuples.len(), 9);
        assert_eq!(tuples[0], vec![0, 0]);
        assert_eq!(tuples[1], vec![0, 1]);
        assert_eq!(tuples[3], vec![1, 0]);
        assert!(tuples.windows(2).all(|w| w[0] < w[1]));
    }
}
