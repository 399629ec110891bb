//! Weak homomorphisms `A ⇝ B`, i.e. strict maps `QA -> B`, composed through
//! the comultiplication: `g ⊙ f = g . Qf . Δ_A`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::algebra::Vector;
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::graded::{Graded, Morphism};
use crate::qcomonad::{Comultiplication, Fragment, GenId, QComplex, QElement, QMap};

pub type QChain = QComplex<ChainComplex>;

type GenEval = dyn Fn(GenId) -> Result<Vector> + Send + Sync;

/// A co-Kleisli arrow `A ⇝ B`, given by its values on the generators of `QA`.
#[derive(Clone)]
pub struct Homomorphism {
    domain: Arc<QChain>,
    codomain: Arc<ChainComplex>,
    on_gen: Arc<GenEval>,
}

impl std::fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Homomorphism")
            .field("domain", self.domain.base())
            .field("codomain", &self.codomain)
            .finish_non_exhaustive()
    }
}

fn memoized(f: impl Fn(GenId) -> Result<Vector> + Send + Sync + 'static) -> Arc<GenEval> {
    let memo: Mutex<HashMap<GenId, Vector>> = Mutex::new(HashMap::new());
    Arc::new(move |g| {
        if let Some(v) = memo.lock().unwrap().get(&g) {
            return Ok(v.clone());
        }
        let v = f(g)?;
        memo.lock().unwrap().insert(g, v.clone());
        Ok(v)
    })
}

impl Homomorphism {
    /// A homomorphism from an arbitrary generator-level rule. The rule is
    /// extended linearly; nothing checks the chain-map law up front.
    pub fn from_fn(
        domain: Arc<QChain>,
        codomain: Arc<ChainComplex>,
        on_gen: impl Fn(GenId) -> Result<Vector> + Send + Sync + 'static,
    ) -> Self {
        Homomorphism {
            domain,
            codomain,
            on_gen: memoized(on_gen),
        }
    }

    /// The strict map `f` seen as the homomorphism `f . ε_A`.
    pub fn from_strict(f: &ChainMap, domain: Arc<QChain>) -> Result<Self> {
        if domain.base().as_ref() != f.source() {
            return Err(Error::ObjectMismatch(
                "map does not start at the domain".into(),
            ));
        }
        f.validate()?;
        let q = domain.clone();
        let f = f.clone();
        Ok(Homomorphism {
            codomain: Arc::new(f.target().clone()),
            on_gen: Arc::new(move |g| {
                let gen = q.generator(g);
                f.apply(gen.dim(), gen.x())
            }),
            domain,
        })
    }

    /// The identity `ε_A`.
    pub fn identity(domain: Arc<QChain>) -> Self {
        let q = domain.clone();
        Homomorphism {
            codomain: domain.base().clone(),
            on_gen: Arc::new(move |g| Ok(q.generator(g).x().clone())),
            domain,
        }
    }

    /// A homomorphism given by a finite table of generator values.
    ///
    /// The chain-map law `d(h[x, z]) = h(z)` is checked on the table; values
    /// outside it evaluate to `Undefined`.
    pub fn from_table(
        domain: Arc<QChain>,
        codomain: Arc<ChainComplex>,
        table: HashMap<GenId, Vector>,
    ) -> Result<Self> {
        let lookup = |g: GenId, dim: usize| {
            table.get(&g).cloned().ok_or_else(|| Error::Undefined {
                dim,
                key: domain.gen_key(g),
            })
        };
        let mut entries: Vec<_> = table.iter().collect();
        entries.sort_by_key(|(g, _)| **g);
        for (&g, v) in entries {
            let gen = domain.generator(g);
            codomain.check_elem(gen.dim(), v)?;
            if let Some(z) = gen.z() {
                let mut hz = codomain.zero(z.dim());
                for &(t, c) in z.terms() {
                    hz = hz.add(&lookup(t, z.dim())?.scale(c))?;
                }
                if codomain.diff(gen.dim(), v) != hz {
                    return Err(Error::NotChainMap(gen.dim()));
                }
            }
        }
        let q = domain.clone();
        let table = Arc::new(table);
        Ok(Homomorphism {
            domain,
            codomain,
            on_gen: Arc::new(move |g| {
                table.get(&g).cloned().ok_or_else(|| Error::Undefined {
                    dim: q.generator(g).dim(),
                    key: q.gen_key(g),
                })
            }),
        })
    }

    pub fn domain(&self) -> &Arc<QChain> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<ChainComplex> {
        &self.codomain
    }

    pub fn on_generator(&self, g: GenId) -> Result<Vector> {
        (self.on_gen)(g)
    }

    pub fn eval(&self, e: &QElement) -> Result<Vector> {
        let mut acc = self.codomain.zero(e.dim());
        for &(g, c) in e.terms() {
            acc = acc.add(&self.on_generator(g)?.scale(c))?;
        }
        Ok(acc)
    }

    /// The underlying strict map `QA -> B`.
    pub fn as_morphism(&self) -> Morphism<QChain, ChainComplex> {
        let this = self.clone();
        Morphism::new(self.domain.clone(), self.codomain.clone(), move |_, e| {
            this.eval(e)
        })
    }

    /// The same homomorphism read on another copy of `QA` (generators are
    /// matched through their keys).
    pub fn rebase(&self, domain: Arc<QChain>) -> Result<Self> {
        if Arc::ptr_eq(&domain, &self.domain) {
            return Ok(self.clone());
        }
        if domain.base() != self.domain.base() {
            return Err(Error::ObjectMismatch(
                "rebasing onto a different complex".into(),
            ));
        }
        let old = self.clone();
        let new = domain.clone();
        Ok(Homomorphism {
            domain,
            codomain: self.codomain.clone(),
            on_gen: memoized(move |g| {
                let dim = new.generator(g).dim();
                let h = old.domain.parse_key(dim, &new.gen_key(g))?;
                old.on_generator(h)
            }),
        })
    }

    /// Table of values on every generator up to `upto`.
    pub fn to_table(&self, upto: usize, limit: usize) -> Result<Vec<(usize, GenId, Vector)>> {
        let m = self.domain.materialize(upto, limit)?;
        let mut out = Vec::new();
        for (dim, gens) in m.generators.iter().enumerate() {
            for &g in gens {
                out.push((dim, g, self.on_generator(g)?));
            }
        }
        Ok(out)
    }

    /// Checks `d(h(e)) = h(d e)` on the given generators.
    pub fn check_chain_law(&self, fragment: &Fragment) -> Result<()> {
        for (dim, g) in fragment.iter() {
            if dim == 0 {
                continue;
            }
            let v = self.on_generator(g)?;
            let z = self
                .domain
                .generator(g)
                .z()
                .expect("positive dimension")
                .clone();
            if self.codomain.diff(dim, &v) != self.eval(&z)? {
                return Err(Error::NotChainMap(dim));
            }
        }
        Ok(())
    }
}

/// `g ⊙ f`, computed by the fused recursion `F[x] = [f[x]]`,
/// `F[x, z] = [f[x, z], F z]` into `QB`, followed by `g`. This is
/// `g . Qf . Δ_A` without building `QQA`.
pub fn compose_hom(g: &Homomorphism, f: &Homomorphism) -> Result<Homomorphism> {
    if f.codomain.as_ref() != g.domain.base().as_ref() {
        return Err(Error::ObjectMismatch(
            "codomain of the first homomorphism is not the domain of the second".into(),
        ));
    }
    let push = Arc::new(PushForward {
        f: f.clone(),
        target: g.domain.clone(),
        memo: Mutex::new(HashMap::new()),
    });
    let g2 = g.clone();
    Ok(Homomorphism::from_fn(
        f.domain.clone(),
        g.codomain.clone(),
        move |gen| {
            let b = push.on_generator(gen)?;
            g2.on_generator(b)
        },
    ))
}

/// The same composite computed literally as `g . Qf . Δ_A` through an
/// explicit `QQA`.
pub fn compose_hom_via_qq(g: &Homomorphism, f: &Homomorphism) -> Result<Homomorphism> {
    if f.codomain.as_ref() != g.domain.base().as_ref() {
        return Err(Error::ObjectMismatch(
            "codomain of the first homomorphism is not the domain of the second".into(),
        ));
    }
    let delta = Comultiplication::new(&f.domain);
    let f_strict = Morphism::new(f.domain.clone(), g.domain.base().clone(), {
        let f = f.clone();
        move |_, e| f.eval(e)
    });
    let qf = QMap::new(f_strict, delta.target().clone(), g.domain.clone())?;
    let g2 = g.clone();
    Ok(Homomorphism::from_fn(
        f.domain.clone(),
        g.codomain.clone(),
        move |gen| {
            let dd = delta.on_generator(gen)?;
            let b = qf.on_generator(dd)?;
            g2.on_generator(b)
        },
    ))
}

struct PushForward {
    f: Homomorphism,
    target: Arc<QChain>,
    memo: Mutex<HashMap<GenId, GenId>>,
}

impl PushForward {
    fn on_generator(&self, g: GenId) -> Result<GenId> {
        if let Some(&h) = self.memo.lock().unwrap().get(&g) {
            return Ok(h);
        }
        let gen = self.f.domain.generator(g);
        let fx = self.f.on_generator(g)?;
        let h = match gen.z() {
            None => self.target.gen0(&fx)?,
            Some(z) => {
                let fz = self.apply(z)?;
                self.target.gen(&fx, &fz)?
            }
        };
        self.memo.lock().unwrap().insert(g, h);
        Ok(h)
    }

    fn apply(&self, e: &QElement) -> Result<QElement> {
        let field = self.target.field();
        let terms = e
            .terms()
            .iter()
            .map(|&(g, c)| Ok((self.on_generator(g)?, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(QElement::from_terms(field, e.dim(), terms))
    }
}

/// Outcome of comparing two homomorphisms on a fragment of `QA`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomEquality {
    pub equal: bool,
    pub checked: usize,
    pub witness: Option<Value>,
    pub fragment: Fragment,
}

impl HomEquality {
    pub fn to_json(&self) -> Value {
        json!({
            "equal": self.equal,
            "checked": self.checked,
            "witness": self.witness,
            "fragment": self.fragment.to_json(),
        })
    }
}

/// Compares two homomorphisms on every generator up to `upto`, or, past the
/// guard, on the exhaustive lower part plus a seeded sample (an error in
/// `strict` mode).
pub fn hom_equal(
    h1: &Homomorphism,
    h2: &Homomorphism,
    upto: usize,
    limit: usize,
    samples: usize,
    seed: u64,
    strict: bool,
) -> Result<HomEquality> {
    if h1.codomain != h2.codomain {
        return Err(Error::ObjectMismatch("different codomains".into()));
    }
    let h2 = h2.rebase(h1.domain.clone())?;
    let fragment = h1.domain.fragment(upto, limit, samples, seed, strict)?;
    let gens: Vec<_> = fragment.iter().collect();
    let mut checked = 0;
    for (dim, g) in gens {
        checked += 1;
        let (a, b) = (h1.on_generator(g)?, h2.on_generator(g)?);
        if a != b {
            return Ok(HomEquality {
                equal: false,
                checked,
                witness: Some(json!({
                    "dim": dim,
                    "gen": h1.domain.gen_key(g),
                    "left": a.to_u64(),
                    "right": b.to_u64(),
                })),
                fragment,
            });
        }
    }
    Ok(HomEquality {
        equal: true,
        checked,
        witness: None,
        fragment,
    })
}
