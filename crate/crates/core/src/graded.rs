//! Degreewise linear structure shared by explicit complexes and the lazy
//! replacement complexes built on top of them.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde_json::Value;

use crate::algebra::{PrimeField, Vector};
use crate::error::{Error, Result};

/// A truncated, positively graded chain complex over a prime field whose
/// elements are values of `Elem` tagged externally with a dimension.
pub trait Graded: Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync + 'static;

    fn field(&self) -> PrimeField;

    /// Truncation level: the complex lives in dimensions `0..=top_dim`.
    fn top_dim(&self) -> usize;

    fn zero(&self, dim: usize) -> Self::Elem;

    fn add(&self, dim: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn scale(&self, dim: usize, c: u32, a: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// The differential out of `dim`. Only meaningful for `dim >= 1`.
    fn diff(&self, dim: usize, e: &Self::Elem) -> Self::Elem;

    /// Checks that `e` is a well-formed element in dimension `dim`.
    fn check_elem(&self, dim: usize, e: &Self::Elem) -> Result<()>;

    fn elem_json(&self, dim: usize, e: &Self::Elem) -> Value;

    fn elem_from_json(&self, dim: usize, v: &Value) -> Result<Self::Elem>;

    /// Identity of objects, used to check composability.
    fn same_object(&self, other: &Self) -> bool;

    fn sub(&self, dim: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let minus_one = self.field().p() - 1;
        self.add(dim, a, &self.scale(dim, minus_one, b))
    }

    /// Everything is a cycle in dimension 0.
    fn is_cycle(&self, dim: usize, e: &Self::Elem) -> bool {
        dim == 0 || self.is_zero(&self.diff(dim, e))
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.top_dim() {
            return Err(Error::DimensionOutOfRange {
                dim,
                max: self.top_dim(),
            });
        }
        Ok(())
    }
}

/// Graded objects whose low dimensions have an explicit finite basis, so that
/// elements, cycles and compatible pairs can be enumerated.
pub trait Finite: Graded {
    /// Highest dimension with an available basis, or `None` if none is.
    fn enumerable_dim(&self) -> Option<usize>;

    fn basis(&self, dim: usize) -> Result<Vec<Self::Elem>>;

    /// Coordinates of `e` in [`Finite::basis`].
    fn coords(&self, dim: usize, e: &Self::Elem) -> Result<Vector>;

    fn cycle_basis(&self, dim: usize) -> Result<Vec<Self::Elem>>;

    fn rank(&self, dim: usize) -> Result<usize> {
        Ok(self.basis(dim)?.len())
    }

    /// `sum coeffs[i] * basis[i]`.
    fn combine(&self, dim: usize, basis: &[Self::Elem], coeffs: &[u32]) -> Self::Elem {
        let mut acc = self.zero(dim);
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0 {
                acc = self.add(dim, &acc, &self.scale(dim, c, b));
            }
        }
        acc
    }
}

type MapFn<S, T> = dyn Fn(usize, &<S as Graded>::Elem) -> Result<<T as Graded>::Elem> + Send + Sync;

/// A degreewise map between graded objects, given as a function on elements.
///
/// Nothing forces the function to be linear or a chain map; the law checks
/// exist to verify exactly that.
pub struct Morphism<S: Graded, T: Graded> {
    source: Arc<S>,
    target: Arc<T>,
    apply: Arc<MapFn<S, T>>,
}

impl<S: Graded, T: Graded> Clone for Morphism<S, T> {
    fn clone(&self) -> Self {
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            apply: self.apply.clone(),
        }
    }
}

impl<S: Graded, T: Graded> Morphism<S, T> {
    pub fn new(
        source: Arc<S>,
        target: Arc<T>,
        apply: impl Fn(usize, &S::Elem) -> Result<T::Elem> + Send + Sync + 'static,
    ) -> Self {
        Morphism {
            source,
            target,
            apply: Arc::new(apply),
        }
    }

    pub fn source(&self) -> &Arc<S> {
        &self.source
    }

    pub fn target(&self) -> &Arc<T> {
        &self.target
    }

    pub fn apply(&self, dim: usize, e: &S::Elem) -> Result<T::Elem> {
        (self.apply)(dim, e)
    }

    /// `next . self`.
    pub fn then<U: Graded>(&self, next: &Morphism<T, U>) -> Result<Morphism<S, U>> {
        if !self.target.same_object(&next.source) {
            return Err(Error::ObjectMismatch(
                "target of the first map is not the source of the second".into(),
            ));
        }
        let first = self.apply.clone();
        let second = next.apply.clone();
        Ok(Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            apply: Arc::new(move |dim, e| second(dim, &first(dim, e)?)),
        })
    }
}

impl<S: Graded> Morphism<S, S> {
    pub fn identity(object: Arc<S>) -> Self {
        Morphism::new(object.clone(), object, |_, e| Ok(e.clone()))
    }
}
