//! Cofibrant replacement of truncated chain complexes over `Z/p`.
//!
//! The replacement `QX` is built lazily from the generators `[x]` and
//! `[x, z]`; the comonad structure, the co-Kleisli composition of weak
//! homomorphisms, algebraic acyclic fibrations with their lifting solvers and
//! one step of the small-object factorisation are exposed on top of it.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod graded;
pub mod io;
pub mod kleisli;
pub mod laws;
pub mod qcomonad;
pub mod soa;
pub mod wfs;

pub use algebra::{Matrix, PrimeField, Vector};
pub use complex::{ChainComplex, ChainMap};
pub use error::{Error, Result};
pub use graded::{Finite, Graded, Morphism};
pub use kleisli::{compose_hom, hom_equal, Homomorphism};
pub use qcomonad::{Comultiplication, GenId, QComplex, QElement, QMap};
pub use wfs::{ChoiceOfLiftings, LiftingSquare};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every seeded choice in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
