//! The universal cofibrant replacement `QX` of a chain complex, built lazily.
//!
//! `(QX)_0` is free on the set `X_0`, with generators written `[x]`. For
//! `i >= 0`, `(QX)_{i+1}` is free on pairs `[x, z]` with `x` in `X_{i+1}` and
//! `z` a cycle of `(QX)_i` such that `ε(z) = d(x)`. The counit sends `[x]`
//! and `[x, z]` to `x`; the differential sends `[x, z]` to `z`.
//!
//! Generators are interned: structurally equal payloads always receive the
//! same [`GenId`], so equality of [`QElement`]s is decidable by comparing
//! sorted term lists. Generators are created on demand;
//! [`QComplex::materialize`] enumerates them explicitly in low dimensions
//! under a size guard.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::algebra::{enumerate_affine, CoefficientTuples, Matrix, PrimeField, Vector};
use crate::error::{Count, Error, Result};
use crate::graded::{Finite, Graded, Morphism};
use crate::wfs::ChoiceOfLiftings;

/// Index of an interned generator inside one [`QComplex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A formal linear combination of generators in a single dimension.
///
/// Terms are sorted by generator id and carry nonzero coefficients only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QElement {
    dim: usize,
    terms: Vec<(GenId, u32)>,
}

impl QElement {
    pub fn zero(dim: usize) -> Self {
        QElement {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn generator(dim: usize, id: GenId) -> Self {
        QElement {
            dim,
            terms: vec![(id, 1)],
        }
    }

    /// Builds from arbitrary terms, merging repeats and dropping zeros.
    pub fn from_terms(
        field: PrimeField,
        dim: usize,
        terms: impl IntoIterator<Item = (GenId, u32)>,
    ) -> Self {
        let mut acc: Vec<(GenId, u32)> = terms.into_iter().collect();
        acc.sort_by_key(|t| t.0);
        let mut out: Vec<(GenId, u32)> = Vec::with_capacity(acc.len());
        for (g, c) in acc {
            let c = c % field.p();
            match out.last_mut() {
                Some(last) if last.0 == g => last.1 = field.add(last.1, c),
                _ => out.push((g, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        QElement { dim, terms: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(GenId, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The generator if this element is exactly one generator with coefficient 1.
    pub fn as_generator(&self) -> Option<GenId> {
        match self.terms.as_slice() {
            [(g, 1)] => Some(*g),
            _ => None,
        }
    }

    pub fn add(&self, other: &QElement, field: PrimeField) -> QElement {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let next = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    i += 1;
                    j += 1;
                    (a.0, field.add(a.1, b.1))
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    i += 1;
                    *a
                }
                (Some(_), Some(b)) => {
                    j += 1;
                    *b
                }
                (Some(a), None) => {
                    i += 1;
                    *a
                }
                (None, Some(b)) => {
                    j += 1;
                    *b
                }
                (None, None) => unreachable!(),
            };
            if next.1 != 0 {
                out.push(next);
            }
        }
        QElement {
            dim: self.dim,
            terms: out,
        }
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> QElement {
        let c = c % field.p();
        if c == 0 {
            return QElement::zero(self.dim);
        }
        QElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|&(g, a)| (g, field.mul(a, c)))
                .collect(),
        }
    }
}

/// An interned generator: `[x]` in dimension 0, `[x, z]` above.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QGenerator<E> {
    dim: usize,
    x: E,
    z: Option<QElement>,
}

impl<E> QGenerator<E> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The counit image `x`.
    pub fn x(&self) -> &E {
        &self.x
    }

    /// The boundary `z`, absent in dimension 0.
    pub fn z(&self) -> Option<&QElement> {
        self.z.as_ref()
    }
}

struct Registry<E> {
    gens: Vec<Arc<QGenerator<E>>>,
    index: HashMap<Arc<QGenerator<E>>, GenId>,
}

/// Explicit tables for the materialized dimensions `0..gens.len()`.
#[derive(Default)]
struct Tables {
    gens: Vec<Vec<GenId>>,
    positions: Vec<HashMap<GenId, usize>>,
    /// `diffs[i - 1]` is the matrix of `d_i` in generator coordinates.
    diffs: Vec<Matrix>,
    epsilon: Vec<Matrix>,
}

/// The lazily generated complex `QB` over a base `B`.
pub struct QComplex<B: Graded> {
    base: Arc<B>,
    registry: RwLock<Registry<B::Elem>>,
    tables: RwLock<Tables>,
}

impl<B: Graded> std::fmt::Debug for QComplex<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QComplex")
            .field("generators", &self.num_generators())
            .field("materialized", &self.materialized_ranks())
            .finish()
    }
}

impl<B: Graded> QComplex<B> {
    pub fn new(base: Arc<B>) -> Arc<Self> {
        Arc::new(QComplex {
            base,
            registry: RwLock::new(Registry {
                gens: Vec::new(),
                index: HashMap::new(),
            }),
            tables: RwLock::new(Tables::default()),
        })
    }

    pub fn base(&self) -> &Arc<B> {
        &self.base
    }

    pub fn num_generators(&self) -> usize {
        self.registry.read().unwrap().gens.len()
    }

    pub fn generator(&self, id: GenId) -> Arc<QGenerator<B::Elem>> {
        self.registry.read().unwrap().gens[id.index()].clone()
    }

    fn intern(&self, g: QGenerator<B::Elem>) -> GenId {
        if let Some(&id) = self.registry.read().unwrap().index.get(&g) {
            return id;
        }
        let mut reg = self.registry.write().unwrap();
        if let Some(&id) = reg.index.get(&g) {
            return id;
        }
        let id = GenId(u32::try_from(reg.gens.len()).expect("generator count fits in u32"));
        let g = Arc::new(g);
        reg.gens.push(g.clone());
        reg.index.insert(g, id);
        id
    }

    /// The generator `[x]` for `x` in `X_0`.
    pub fn gen0(&self, x: &B::Elem) -> Result<GenId> {
        self.base.check_elem(0, x)?;
        Ok(self.intern(QGenerator {
            dim: 0,
            x: x.clone(),
            z: None,
        }))
    }

    /// The generator `[x, z]` in dimension `z.dim() + 1`.
    pub fn gen(&self, x: &B::Elem, z: &QElement) -> Result<GenId> {
        let dim = z.dim + 1;
        self.base.check_dim(dim)?;
        self.base.check_elem(dim, x)?;
        self.check_elem(z.dim, z)?;
        if !self.is_cycle(z.dim, z) {
            return Err(Error::NotACycle { dim });
        }
        if self.epsilon(z) != self.base.diff(dim, x) {
            return Err(Error::CounitMismatch { dim });
        }
        Ok(self.intern(QGenerator {
            dim,
            x: x.clone(),
            z: Some(z.clone()),
        }))
    }

    pub fn element(&self, id: GenId) -> QElement {
        QElement::generator(self.generator(id).dim, id)
    }

    /// Linear extension of `[x] -> x`, `[x, z] -> x`.
    pub fn epsilon(&self, e: &QElement) -> B::Elem {
        let reg = self.registry.read().unwrap();
        let mut acc = self.base.zero(e.dim);
        for &(g, c) in &e.terms {
            let term = self.base.scale(e.dim, c, &reg.gens[g.index()].x);
            acc = self.base.add(e.dim, &acc, &term);
        }
        acc
    }

    /// Linear extension of `[x, z] -> z`.
    pub fn q_diff(&self, e: &QElement) -> Result<QElement> {
        if e.dim == 0 {
            return Err(Error::DimensionOutOfRange {
                dim: 0,
                max: self.base.top_dim(),
            });
        }
        let reg = self.registry.read().unwrap();
        let field = self.base.field();
        let mut acc = QElement::zero(e.dim - 1);
        for &(g, c) in &e.terms {
            let z = reg.gens[g.index()]
                .z
                .as_ref()
                .expect("positive-dimensional generator");
            acc = acc.add(&z.scale(c, field), field);
        }
        Ok(acc)
    }

    /// Nested JSON key: `{"x": ..}` in dimension 0, `{"x": .., "z": [[key, coeff], ..]}` above.
    pub fn gen_key(&self, id: GenId) -> Value {
        let g = self.generator(id);
        let mut obj = serde_json::Map::new();
        obj.insert("x".into(), self.base.elem_json(g.dim, &g.x));
        if let Some(z) = &g.z {
            obj.insert("z".into(), self.elem_json(z.dim, z));
        }
        Value::Object(obj)
    }

    /// Resolves a generator key in dimension `dim`, interning (and validating)
    /// the generator if it is new.
    pub fn parse_key(&self, dim: usize, key: &Value) -> Result<GenId> {
        let obj = key
            .as_object()
            .ok_or_else(|| Error::Parse(format!("generator key must be an object, found {key}")))?;
        let x = obj
            .get("x")
            .ok_or_else(|| Error::Parse(format!("generator key without \"x\": {key}")))?;
        let x = self.base.elem_from_json(dim, x)?;
        match (dim, obj.get("z")) {
            (0, None) => self.gen0(&x),
            (0, Some(_)) => Err(Error::Parse(format!(
                "dimension-0 key carries \"z\": {key}"
            ))),
            (_, Some(z)) => {
                let z = self.elem_from_json(dim - 1, z)?;
                self.gen(&x, &z)
            }
            (_, None) => Err(Error::Parse(format!(
                "key in dimension {dim} without \"z\": {key}"
            ))),
        }
    }

    fn key_string(&self, id: GenId) -> String {
        self.gen_key(id).to_string()
    }

    /// Generator ids of the materialized dimensions.
    pub fn materialized_generators(&self, dim: usize) -> Option<Vec<GenId>> {
        self.tables.read().unwrap().gens.get(dim).cloned()
    }

    pub fn materialized_ranks(&self) -> Vec<usize> {
        self.tables
            .read()
            .unwrap()
            .gens
            .iter()
            .map(Vec::len)
            .collect()
    }

    /// Cycle basis of `(QX)_dim` in generator coordinates; needs `dim` materialized.
    fn cycle_coordinates(&self, dim: usize) -> Result<(Matrix, Vec<Vector>)> {
        let t = self.tables.read().unwrap();
        let n = t.gens.get(dim).ok_or(Error::NotMaterialized { dim })?.len();
        let field = self.base.field();
        let basis = if dim == 0 {
            (0..n).map(|k| Vector::unit(field, n, k)).collect()
        } else {
            t.diffs[dim - 1].kernel_basis()
        };
        Ok((t.epsilon[dim].clone(), basis))
    }

    fn element_from_coords(&self, dim: usize, coords: &Vector) -> Result<QElement> {
        let t = self.tables.read().unwrap();
        let gens = t.gens.get(dim).ok_or(Error::NotMaterialized { dim })?;
        let terms: Vec<(GenId, u32)> = gens
            .iter()
            .zip(coords.entries())
            .filter(|(_, &c)| c != 0)
            .map(|(&g, &c)| (g, c))
            .collect();
        Ok(QElement::from_terms(self.base.field(), dim, terms))
    }

    pub fn check_index(&self, e: &QElement) -> Result<()> {
        let reg = self.registry.read().unwrap();
        for &(g, _) in &e.terms {
            match reg.gens.get(g.index()) {
                Some(gen) if gen.dim == e.dim => {}
                _ => {
                    return Err(Error::UnknownGenerator {
                        dim: e.dim,
                        key: Value::from(g.index()),
                    })
                }
            }
        }
        Ok(())
    }
}

impl<B: Finite> QComplex<B> {
    /// Enumerates every generator in dimensions `0..=upto`.
    ///
    /// Dimension 0 takes all `p^{n_0}` elements of `X_0`. Dimension `i + 1`
    /// takes, for each `x` in `X_{i+1}`, every cycle `z` of `(QX)_i` with
    /// `ε(z) = d(x)`; these form a coset of the cycles killed by `ε`. The guard
    /// bounds the number of generators per dimension as well as the number of
    /// base elements scanned. Dimensions completed before a guard failure stay
    /// materialized.
    pub fn materialize(&self, upto: usize, limit: usize) -> Result<Materialization> {
        self.base.check_dim(upto)?;
        let field = self.base.field();
        let p = field.p() as u64;
        for dim in 0..=upto {
            if self.tables.read().unwrap().gens.len() > dim {
                continue;
            }
            let rank = self.base.rank(dim)?;
            if Count::pow(p, rank).exceeds(limit) {
                return Err(Error::SizeGuardExceeded {
                    dim,
                    required: Count::pow(p, rank),
                    limit,
                });
            }
            let base_basis = self.base.basis(dim)?;
            let xs: Vec<B::Elem> = CoefficientTuples::new(field, rank)
                .map(|c| self.base.combine(dim, &base_basis, &c))
                .collect();
            let ids: Vec<GenId> = if dim == 0 {
                xs.iter().map(|x| self.gen0(x)).collect::<Result<_>>()?
            } else {
                let (eps_prev, cycles) = self.cycle_coordinates(dim - 1)?;
                let n_prev = eps_prev.cols();
                let kmat = Matrix::from_columns(field, n_prev, &cycles);
                let ek = eps_prev.mul(&kmat)?;
                let free = ek.kernel_basis();
                let per_x = Count::pow(p, free.len());
                let mut plan = Vec::new();
                let mut total = Count(0);
                for x in &xs {
                    let target = self.base.coords(dim - 1, &self.base.diff(dim, x))?;
                    if let Some(c0) = ek.solve(&target)? {
                        total = total + per_x;
                        plan.push((x, c0));
                    }
                }
                if total.exceeds(limit) {
                    return Err(Error::SizeGuardExceeded {
                        dim,
                        required: total,
                        limit,
                    });
                }
                let mut ids = Vec::with_capacity(total.0 as usize);
                for (x, c0) in plan {
                    for c in enumerate_affine(field, &free, &c0, usize::MAX)? {
                        let z = self.element_from_coords(dim - 1, &kmat.apply(&c)?)?;
                        ids.push(self.gen(x, &z)?);
                    }
                }
                ids
            };
            self.record_dimension(dim, ids)?;
        }
        Ok(self.materialization(upto))
    }

    fn record_dimension(&self, dim: usize, ids: Vec<GenId>) -> Result<()> {
        let field = self.base.field();
        let positions: HashMap<GenId, usize> =
            ids.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let rank = self.base.rank(dim)?;
        let mut eps_cols = Vec::with_capacity(ids.len());
        let mut diff_cols = Vec::with_capacity(ids.len());
        for &g in &ids {
            let gen = self.generator(g);
            eps_cols.push(self.base.coords(dim, &gen.x)?);
            if let Some(z) = &gen.z {
                diff_cols.push(self.coords(dim - 1, z)?);
            }
        }
        let eps = Matrix::from_columns(field, rank, &eps_cols);
        let mut t = self.tables.write().unwrap();
        debug_assert_eq!(t.gens.len(), dim);
        if dim > 0 {
            let n_prev = t.gens[dim - 1].len();
            t.diffs
                .push(Matrix::from_columns(field, n_prev, &diff_cols));
        }
        t.epsilon.push(eps);
        t.gens.push(ids);
        t.positions.push(positions);
        Ok(())
    }

    fn materialization(&self, upto: usize) -> Materialization {
        let t = self.tables.read().unwrap();
        Materialization {
            generators: t.gens[..=upto].to_vec(),
            diffs: t.diffs[..upto].to_vec(),
            epsilon: t.epsilon[..=upto].to_vec(),
            field: self.base.field(),
        }
    }

    /// Draws up to `count` random generators in dimension `dim`, which needs
    /// `dim - 1` materialized (nothing for `dim = 0`). Returns distinct ids in
    /// draw order.
    pub fn sample_generators(
        &self,
        dim: usize,
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<GenId>> {
        self.base.check_dim(dim)?;
        let field = self.base.field();
        let p = field.p();
        let base_basis = self.base.basis(dim)?;
        let random_x = |rng: &mut ChaCha8Rng| {
            let c: Vec<u32> = base_basis.iter().map(|_| rng.gen_range(0..p)).collect();
            self.base.combine(dim, &base_basis, &c)
        };
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        if dim == 0 {
            for _ in 0..count {
                let g = self.gen0(&random_x(rng))?;
                if seen.insert(g) {
                    out.push(g);
                }
            }
            return Ok(out);
        }
        let (eps_prev, cycles) = self.cycle_coordinates(dim - 1)?;
        let kmat = Matrix::from_columns(field, eps_prev.cols(), &cycles);
        let ek = eps_prev.mul(&kmat)?;
        let free = ek.kernel_basis();
        let mut attempts = 0;
        while out.len() < count && attempts < count.saturating_mul(20) {
            attempts += 1;
            let x = random_x(rng);
            let target = self.base.coords(dim - 1, &self.base.diff(dim, &x))?;
            let Some(mut c) = ek.solve(&target)? else {
                continue;
            };
            for b in &free {
                c = c.add(&b.scale(rng.gen_range(0..p)))?;
            }
            let z = self.element_from_coords(dim - 1, &kmat.apply(&c)?)?;
            let g = self.gen(&x, &z)?;
            if seen.insert(g) {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// Generators to check laws on: every generator up to `upto` when the
    /// guard allows, otherwise everything below the first over-guard
    /// dimension plus a seeded sample there (unless `strict`).
    pub fn fragment(
        &self,
        upto: usize,
        limit: usize,
        samples: usize,
        seed: u64,
        strict: bool,
    ) -> Result<Fragment> {
        match self.materialize(upto, limit) {
            Ok(m) => Ok(Fragment {
                generators: m.generators,
                exhaustive_upto: Some(upto),
                sampled_dim: None,
                seed,
            }),
            Err(Error::SizeGuardExceeded {
                dim,
                required,
                limit,
            }) => {
                if strict {
                    return Err(Error::SizeGuardExceeded {
                        dim,
                        required,
                        limit,
                    });
                }
                let mut generators: Vec<Vec<GenId>> = (0..dim)
                    .map(|d| self.materialized_generators(d).expect("materialized"))
                    .collect();
                let mut rng = crate::seeded_rng(seed ^ (dim as u64).wrapping_mul(0x9e37_79b9));
                generators.push(self.sample_generators(dim, samples, &mut rng)?);
                Ok(Fragment {
                    generators,
                    exhaustive_upto: dim.checked_sub(1),
                    sampled_dim: Some(dim),
                    seed,
                })
            }
            Err(e) => Err(e),
        }
    }
}

/// The generators a law check ranges over, with an honest account of coverage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub generators: Vec<Vec<GenId>>,
    pub exhaustive_upto: Option<usize>,
    pub sampled_dim: Option<usize>,
    pub seed: u64,
}

impl Fragment {
    pub fn iter(&self) -> impl Iterator<Item = (usize, GenId)> + '_ {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(d, gs)| gs.iter().map(move |&g| (d, g)))
    }

    pub fn len(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_sampled(&self) -> bool {
        self.sampled_dim.is_some()
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "ranks": self.generators.iter().map(Vec::len).collect::<Vec<_>>(),
            "exhaustive_upto": self.exhaustive_upto,
            "sampled_dim": self.sampled_dim,
            "seed": if self.is_sampled() { Some(self.seed) } else { None },
        })
    }
}

/// Explicit form of the low dimensions of `QX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Materialization {
    /// Generators per dimension, in enumeration order.
    pub generators: Vec<Vec<GenId>>,
    /// `diffs[i - 1]`: matrix of `d_i` in generator coordinates.
    pub diffs: Vec<Matrix>,
    /// `epsilon[i]`: matrix of `ε_i` into the base coordinates.
    pub epsilon: Vec<Matrix>,
    field: PrimeField,
}

impl Materialization {
    pub fn ranks(&self) -> Vec<usize> {
        self.generators.iter().map(Vec::len).collect()
    }

    /// The free complex spanned by the materialized generators.
    pub fn complex(&self) -> crate::complex::ChainComplex {
        crate::complex::ChainComplex::from_raw(self.field, self.ranks(), self.diffs.clone())
    }

    pub fn to_json<B: Graded>(&self, q: &QComplex<B>) -> Value {
        serde_json::json!({
            "p": self.field.p(),
            "ranks": self.ranks(),
            "diffs": self.diffs.iter().map(Matrix::to_rows).collect::<Vec<_>>(),
            "epsilon": self.epsilon.iter().map(Matrix::to_rows).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|gs| gs.iter().map(|&g| q.gen_key(g)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

impl<B: Graded> Graded for QComplex<B> {
    type Elem = QElement;

    fn field(&self) -> PrimeField {
        self.base.field()
    }

    fn top_dim(&self) -> usize {
        self.base.top_dim()
    }

    fn zero(&self, dim: usize) -> QElement {
        QElement::zero(dim)
    }

    fn add(&self, _dim: usize, a: &QElement, b: &QElement) -> QElement {
        a.add(b, self.base.field())
    }

    fn scale(&self, _dim: usize, c: u32, a: &QElement) -> QElement {
        a.scale(c, self.base.field())
    }

    fn is_zero(&self, a: &QElement) -> bool {
        a.is_zero()
    }

    fn diff(&self, _dim: usize, e: &QElement) -> QElement {
        self.q_diff(e)
            .expect("differential out of a positive dimension")
    }

    fn check_elem(&self, dim: usize, e: &QElement) -> Result<()> {
        self.base.check_dim(dim)?;
        if e.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: e.dim,
            });
        }
        let p = self.base.field().p();
        if e.terms.iter().any(|&(_, c)| c == 0 || c >= p)
            || e.terms.windows(2).any(|w| w[0].0 >= w[1].0)
        {
            return Err(Error::Parse("element is not in canonical form".into()));
        }
        self.check_index(e)
    }

    fn elem_json(&self, _dim: usize, e: &QElement) -> Value {
        let mut terms: Vec<(String, Value, u32)> = e
            .terms
            .iter()
            .map(|&(g, c)| (self.key_string(g), self.gen_key(g), c))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Value::Array(
            terms
                .into_iter()
                .map(|(_, k, c)| Value::Array(vec![k, Value::from(c)]))
                .collect(),
        )
    }

    fn elem_from_json(&self, dim: usize, v: &Value) -> Result<QElement> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("expected a term list, found {v}")))?;
        let p = self.base.field().p() as u64;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let pair = t
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse(format!("expected [key, coeff], found {t}")))?;
            let c = pair[1]
                .as_u64()
                .filter(|&c| c < p)
                .ok_or_else(|| Error::Parse(format!("{} is not a residue mod {p}", pair[1])))?;
            terms.push((self.parse_key(dim, &pair[0])?, c as u32));
        }
        Ok(QElement::from_terms(self.base.field(), dim, terms))
    }

    fn same_object(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}

impl<B: Graded> Finite for QComplex<B> {
    fn enumerable_dim(&self) -> Option<usize> {
        self.tables.read().unwrap().gens.len().checked_sub(1)
    }

    fn basis(&self, dim: usize) -> Result<Vec<QElement>> {
        let t = self.tables.read().unwrap();
        let gens = t.gens.get(dim).ok_or(Error::NotMaterialized { dim })?;
        Ok(gens.iter().map(|&g| QElement::generator(dim, g)).collect())
    }

    fn coords(&self, dim: usize, e: &QElement) -> Result<Vector> {
        let t = self.tables.read().unwrap();
        let pos = t.positions.get(dim).ok_or(Error::NotMaterialized { dim })?;
        let mut v = vec![0u32; t.gens[dim].len()];
        for &(g, c) in &e.terms {
            let k = *pos.get(&g).ok_or_else(|| Error::UnknownGenerator {
                dim,
                key: Value::from(g.index()),
            })?;
            v[k] = c;
        }
        Ok(Vector::from_residues(self.base.field(), v))
    }

    fn cycle_basis(&self, dim: usize) -> Result<Vec<QElement>> {
        let (_, basis) = self.cycle_coordinates(dim)?;
        basis
            .iter()
            .map(|c| self.element_from_coords(dim, c))
            .collect()
    }

    fn rank(&self, dim: usize) -> Result<usize> {
        let t = self.tables.read().unwrap();
        Ok(t.gens.get(dim).ok_or(Error::NotMaterialized { dim })?.len())
    }
}

/// The counit `ε_X : QX -> X`.
pub fn counit<B: Graded>(q: &Arc<QComplex<B>>) -> Morphism<QComplex<B>, B> {
    let qc = q.clone();
    Morphism::new(q.clone(), q.base.clone(), move |_, e| Ok(qc.epsilon(e)))
}

/// The differential of `QX` as a plain function, for law checks.
pub fn differential<B: Graded>(q: &QComplex<B>, e: &QElement) -> Result<QElement> {
    q.q_diff(e)
}

/// Inclusion of generators: `k_0(x) = [x]` and `k(x, z) = [x, z]`.
pub fn canonical_liftings<B: Graded>(q: &Arc<QComplex<B>>) -> ChoiceOfLiftings<QComplex<B>, B> {
    let q0 = q.clone();
    let q1 = q.clone();
    ChoiceOfLiftings::new(
        counit(q),
        move |x| Ok(QElement::generator(0, q0.gen0(x)?)),
        move |dim, x, z| Ok(QElement::generator(dim, q1.gen(x, z)?)),
    )
}

fn memo_get<K: std::hash::Hash + Eq, V: Clone>(memo: &Mutex<HashMap<K, V>>, k: &K) -> Option<V> {
    memo.lock().unwrap().get(k).cloned()
}

fn memo_put<K: std::hash::Hash + Eq, V>(memo: &Mutex<HashMap<K, V>>, k: K, v: V) {
    memo.lock().unwrap().insert(k, v);
}

/// Applies a generator-level rule `id -> element` linearly to `e`.
fn extend_linearly<T: Graded>(
    target: &T,
    dim: usize,
    e: &QElement,
    mut on_gen: impl FnMut(GenId) -> Result<T::Elem>,
) -> Result<T::Elem> {
    let mut acc = target.zero(dim);
    for &(g, c) in e.terms() {
        let img = on_gen(g)?;
        acc = target.add(dim, &acc, &target.scale(dim, c, &img));
    }
    Ok(acc)
}

/// The comultiplication `Δ_X : QX -> QQX`, `[x] -> [[x]]`,
/// `[x, z] -> [[x, z], Δ(z)]`, memoized per generator.
pub struct Comultiplication<B: Graded> {
    qq: Arc<QComplex<QComplex<B>>>,
    memo: Mutex<HashMap<GenId, GenId>>,
}

impl<B: Graded> Comultiplication<B> {
    /// Builds `Δ` into a fresh `QQX`.
    pub fn new(q: &Arc<QComplex<B>>) -> Arc<Self> {
        Self::into_target(QComplex::new(q.clone()))
    }

    /// Builds `Δ` into an existing `QQX`.
    pub fn into_target(qq: Arc<QComplex<QComplex<B>>>) -> Arc<Self> {
        Arc::new(Comultiplication {
            qq,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn source(&self) -> &Arc<QComplex<B>> {
        self.qq.base()
    }

    pub fn target(&self) -> &Arc<QComplex<QComplex<B>>> {
        &self.qq
    }

    /// Image of a single generator, which is always a single generator of `QQX`.
    pub fn on_generator(&self, g: GenId) -> Result<GenId> {
        if let Some(h) = memo_get(&self.memo, &g) {
            return Ok(h);
        }
        let q = self.source();
        let gen = q.generator(g);
        let outer = QElement::generator(gen.dim, g);
        let h = match &gen.z {
            None => self.qq.gen0(&outer)?,
            Some(z) => {
                let dz = self.apply(z)?;
                self.qq.gen(&outer, &dz)?
            }
        };
        memo_put(&self.memo, g, h);
        Ok(h)
    }

    pub fn apply(&self, e: &QElement) -> Result<QElement> {
        extend_linearly(self.qq.as_ref(), e.dim(), e, |g| {
            Ok(QElement::generator(e.dim(), self.on_generator(g)?))
        })
    }

    pub fn morphism(self: &Arc<Self>) -> Morphism<QComplex<B>, QComplex<QComplex<B>>> {
        let this = self.clone();
        Morphism::new(self.source().clone(), self.qq.clone(), move |_, e| {
            this.apply(e)
        })
    }
}

/// The functor action `Qf : QA -> QB`, `[x] -> [f x]`, `[x, z] -> [f x, Qf z]`.
pub struct QMap<A: Graded, B: Graded> {
    f: Morphism<A, B>,
    source: Arc<QComplex<A>>,
    target: Arc<QComplex<B>>,
    memo: Mutex<HashMap<GenId, GenId>>,
}

impl<A: Graded, B: Graded> QMap<A, B> {
    pub fn new(
        f: Morphism<A, B>,
        source: Arc<QComplex<A>>,
        target: Arc<QComplex<B>>,
    ) -> Result<Arc<Self>> {
        if !source.base().same_object(f.source()) || !target.base().same_object(f.target()) {
            return Err(Error::ObjectMismatch(
                "replacement complexes are not built over the map's objects".into(),
            ));
        }
        Ok(Arc::new(QMap {
            f,
            source,
            target,
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn source(&self) -> &Arc<QComplex<A>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QComplex<B>> {
        &self.target
    }

    pub fn on_generator(&self, g: GenId) -> Result<GenId> {
        if let Some(h) = memo_get(&self.memo, &g) {
            return Ok(h);
        }
        let gen = self.source.generator(g);
        let fx = self.f.apply(gen.dim, &gen.x)?;
        let h = match &gen.z {
            None => self.target.gen0(&fx)?,
            Some(z) => {
                let qz = self.apply(z)?;
                self.target.gen(&fx, &qz)?
            }
        };
        memo_put(&self.memo, g, h);
        Ok(h)
    }

    pub fn apply(&self, e: &QElement) -> Result<QElement> {
        extend_linearly(self.target.as_ref(), e.dim(), e, |g| {
            Ok(QElement::generator(e.dim(), self.on_generator(g)?))
        })
    }

    pub fn morphism(self: &Arc<Self>) -> Morphism<QComplex<A>, QComplex<B>> {
        let this = self.clone();
        Morphism::new(self.source.clone(), self.target.clone(), move |_, e| {
            this.apply(e)
        })
    }
}

/// The unique lifting-preserving map `h : QX -> Y` over `X` into an algebraic
/// acyclic fibration `(f, k)`: `h[x] = k_0(x)`, `h[x, z] = k(x, h z)`.
pub struct InitialMorphism<B: Graded, Y: Graded> {
    q: Arc<QComplex<B>>,
    liftings: ChoiceOfLiftings<Y, B>,
    memo: Mutex<HashMap<GenId, Y::Elem>>,
}

impl<B: Graded, Y: Graded> InitialMorphism<B, Y> {
    pub fn new(q: Arc<QComplex<B>>, liftings: ChoiceOfLiftings<Y, B>) -> Result<Arc<Self>> {
        if !q.base().same_object(liftings.target()) {
            return Err(Error::ObjectMismatch(
                "liftings do not lie over the base of the replacement".into(),
            ));
        }
        Ok(Arc::new(InitialMorphism {
            q,
            liftings,
            memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn on_generator(&self, g: GenId) -> Result<Y::Elem> {
        if let Some(y) = memo_get(&self.memo, &g) {
            return Ok(y);
        }
        let gen = self.q.generator(g);
        let square = crate::wfs::LiftingSquare {
            dim: gen.dim,
            top: match &gen.z {
                None => None,
                Some(z) => Some(self.apply(z)?),
            },
            bottom: gen.x.clone(),
        };
        let y = crate::wfs::solve_lifting(&self.liftings, &square)?;
        memo_put(&self.memo, g, y.clone());
        Ok(y)
    }

    pub fn apply(&self, e: &QElement) -> Result<Y::Elem> {
        extend_linearly(self.liftings.source().as_ref(), e.dim(), e, |g| {
            self.on_generator(g)
        })
    }

    pub fn morphism(self: &Arc<Self>) -> Morphism<QComplex<B>, Y> {
        let this = self.clone();
        Morphism::new(
            self.q.clone(),
            self.liftings.source().clone(),
            move |_, e| this.apply(e),
        )
    }
}
