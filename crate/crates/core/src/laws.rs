//! Law suites for the replacement comonad on an explicit complex, collected
//! into a deterministic JSON report.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::graded::{Graded, Morphism};
use crate::qcomonad::{
    canonical_liftings, counit, Comultiplication, Fragment, GenId, InitialMorphism, QComplex,
    QElement, QMap,
};
use crate::wfs::{
    compose_liftings, linear_liftings, twisted_liftings, validate_aaf, verify_aaf_morphism,
    ChoiceOfLiftings, Coverage,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawConfig {
    pub max_dim: usize,
    pub max_elems: usize,
    /// Generators drawn in the first dimension past the guard.
    pub samples: usize,
    pub seed: u64,
    pub strict: bool,
    /// Fault injection: perturbs `Δ` on dimension-0 generators.
    pub corrupt_delta: bool,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            max_dim: 2,
            max_elems: 4096,
            samples: 256,
            seed: 0,
            strict: false,
            corrupt_delta: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawOutcome {
    pub law: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<Value>,
    pub coverage: Option<Value>,
}

impl LawOutcome {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "law": self.law,
            "passed": self.passed,
            "checked": self.checked,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        if let Some(c) = &self.coverage {
            v["coverage"] = c.clone();
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub fragment: Value,
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, law: &str) -> Option<&LawOutcome> {
        self.outcomes.iter().find(|o| o.law == law)
    }

    pub fn first_failure(&self) -> Option<&LawOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.passed(),
            "fragment": self.fragment,
            "laws": self.outcomes.iter().map(LawOutcome::to_json).collect::<Vec<_>>(),
            "first_failure": self.first_failure().map(|o| json!({
                "law": o.law,
                "witness": o.witness,
            })),
        })
    }
}

type Aaf = ChoiceOfLiftings<ChainComplex, ChainComplex>;
type Q = QComplex<ChainComplex>;
type QQ = QComplex<Q>;

/// Runs `check` on every generator of the fragment, stopping at the first
/// witness. Errors count as failures, their JSON rendering as the witness.
fn each_generator(
    law: impl Into<String>,
    fragment: &Fragment,
    mut check: impl FnMut(usize, GenId) -> Result<Option<Value>>,
) -> LawOutcome {
    let mut checked = 0;
    for (dim, g) in fragment.iter() {
        checked += 1;
        let failure = match check(dim, g) {
            Ok(None) => continue,
            Ok(Some(w)) => w,
            Err(e) => e.to_json(),
        };
        return LawOutcome {
            law: law.into(),
            passed: false,
            checked,
            witness: Some(failure),
            coverage: None,
        };
    }
    LawOutcome {
        law: law.into(),
        passed: true,
        checked,
        witness: None,
        coverage: None,
    }
}

fn from_coverage(law: impl Into<String>, r: Result<Coverage>) -> LawOutcome {
    match r {
        Ok(c) => LawOutcome {
            law: law.into(),
            passed: true,
            checked: c.checked(),
            witness: None,
            coverage: Some(c.to_json()),
        },
        Err(e) => LawOutcome {
            law: law.into(),
            passed: false,
            checked: 0,
            witness: Some(e.to_json()),
            coverage: None,
        },
    }
}

fn failed(law: impl Into<String>, e: Error) -> LawOutcome {
    LawOutcome {
        law: law.into(),
        passed: false,
        checked: 0,
        witness: Some(e.to_json()),
        coverage: None,
    }
}

fn witness(q: &Q, dim: usize, g: GenId, left: Value, right: Value) -> Option<Value> {
    Some(json!({ "dim": dim, "gen": q.gen_key(g), "left": left, "right": right }))
}

/// The comultiplication under test, possibly corrupted by adding the
/// generator `[0]` of `QQX` to the image of each dimension-0 generator.
#[derive(Clone)]
pub struct DeltaUnderTest {
    delta: Arc<Comultiplication<ChainComplex>>,
    extra: Option<GenId>,
}

impl DeltaUnderTest {
    pub fn new(q: &Arc<Q>, corrupt: bool) -> Result<Self> {
        let delta = Comultiplication::new(q);
        let extra = if corrupt {
            Some(delta.target().gen0(&QElement::zero(0))?)
        } else {
            None
        };
        Ok(DeltaUnderTest { delta, extra })
    }

    pub fn target(&self) -> &Arc<QQ> {
        self.delta.target()
    }

    pub fn apply(&self, e: &QElement) -> Result<QElement> {
        let mut out = self.delta.apply(e)?;
        if let (Some(n), 0) = (self.extra, e.dim()) {
            let field = self.delta.source().field();
            for &(_, c) in e.terms() {
                out = out.add(&QElement::generator(0, n).scale(c, field), field);
            }
        }
        Ok(out)
    }

    pub fn morphism(&self) -> Morphism<Q, QQ> {
        let this = self.clone();
        Morphism::new(
            self.delta.source().clone(),
            self.target().clone(),
            move |_, e| this.apply(e),
        )
    }
}

/// Three fibrations over `x`: the identity with linear liftings, and the
/// projection `x ⊕ 2_1 ⊕ 2_2 -> x` (the disks that fit under the truncation)
/// with linear and with non-linear liftings.
pub fn standard_fibrations(x: &ChainComplex) -> Result<Vec<(String, ChainMap, Aaf)>> {
    let field = x.field();
    let trunc = x.trunc();
    let mut extra = ChainComplex::disk(field, 1, trunc);
    if trunc >= 2 {
        extra = ChainComplex::direct_sum(&extra, &ChainComplex::disk(field, 2, trunc))?.sum;
    }
    let projection = ChainComplex::direct_sum(x, &extra)?.pl;
    let id = ChainMap::identity(x);
    Ok(vec![
        ("identity".to_string(), id.clone(), linear_liftings(&id)?),
        (
            "projection_linear".to_string(),
            projection.clone(),
            linear_liftings(&projection)?,
        ),
        (
            "projection_twisted".to_string(),
            projection.clone(),
            twisted_liftings(&projection)?,
        ),
    ])
}

/// Runs every suite on `x`: differential, counit and coassociativity laws,
/// chain-map properties of `ε` and `Δ`, naturality against `maps` (each must
/// start at `x`), certification of the canonical liftings, initiality and
/// uniqueness against the standard fibrations, and the description of `Δ` as
/// the initial map into the composed liftings.
pub fn run_q_laws(x: &ChainComplex, maps: &[ChainMap], cfg: &LawConfig) -> Result<LawReport> {
    x.validate()?;
    let xa = Arc::new(x.clone());
    let q = QComplex::new(xa.clone());
    let upto = cfg.max_dim.min(x.trunc());
    let fragment = q.fragment(upto, cfg.max_elems, cfg.samples, cfg.seed, cfg.strict)?;
    let delta = DeltaUnderTest::new(&q, cfg.corrupt_delta)?;
    let qq = delta.target().clone();
    let eps = counit(&q);
    let q_eps = QMap::new(eps.clone(), qq.clone(), q.clone())?;
    let delta_q = Comultiplication::new(&qq);
    let q_delta = QMap::new(delta.morphism(), qq.clone(), delta_q.target().clone())?;
    let elem = |dim: usize, g: GenId| QElement::generator(dim, g);

    let mut out = Vec::new();
    out.push(each_generator("d_squared", &fragment, |dim, g| {
        if dim < 2 {
            return Ok(None);
        }
        let dd = q.q_diff(&q.q_diff(&elem(dim, g))?)?;
        Ok((!dd.is_zero())
            .then(|| json!({ "dim": dim, "gen": q.gen_key(g), "dd": q.elem_json(dim - 2, &dd) })))
    }));
    out.push(each_generator("counit_chain_map", &fragment, |dim, g| {
        if dim == 0 {
            return Ok(None);
        }
        let e = elem(dim, g);
        let left = x.diff(dim, &q.epsilon(&e));
        let right = q.epsilon(&q.q_diff(&e)?);
        Ok((left != right)
            .then(|| witness(&q, dim, g, left.to_u64().into(), right.to_u64().into()))
            .flatten())
    }));
    out.push(each_generator("counit_left", &fragment, |dim, g| {
        let e = elem(dim, g);
        let back = qq.epsilon(&delta.apply(&e)?);
        Ok((back != e)
            .then(|| witness(&q, dim, g, q.elem_json(dim, &back), q.elem_json(dim, &e)))
            .flatten())
    }));
    out.push(each_generator("counit_right", &fragment, |dim, g| {
        let e = elem(dim, g);
        let back = q_eps.apply(&delta.apply(&e)?)?;
        Ok((back != e)
            .then(|| witness(&q, dim, g, q.elem_json(dim, &back), q.elem_json(dim, &e)))
            .flatten())
    }));
    out.push(each_generator("coassociativity", &fragment, |dim, g| {
        let d = delta.apply(&elem(dim, g))?;
        let (left, right) = (delta_q.apply(&d)?, q_delta.apply(&d)?);
        let qqq = delta_q.target();
        Ok((left != right)
            .then(|| {
                witness(
                    &q,
                    dim,
                    g,
                    qqq.elem_json(dim, &left),
                    qqq.elem_json(dim, &right),
                )
            })
            .flatten())
    }));
    out.push(each_generator(
        "comultiplication_chain_map",
        &fragment,
        |dim, g| {
            if dim == 0 {
                return Ok(None);
            }
            let e = elem(dim, g);
            let left = qq.q_diff(&delta.apply(&e)?)?;
            let right = delta.apply(&q.q_diff(&e)?)?;
            Ok((left != right)
                .then(|| {
                    witness(
                        &q,
                        dim,
                        g,
                        qq.elem_json(dim - 1, &left),
                        qq.elem_json(dim - 1, &right),
                    )
                })
                .flatten())
        },
    ));

    for (k, m) in maps.iter().enumerate() {
        out.extend(naturality(k, m, &q, &delta, &fragment)?);
    }

    let canonical = canonical_liftings(&q);
    out.push(from_coverage(
        "canonical_liftings",
        validate_aaf(&canonical, cfg.max_elems, cfg.samples, cfg.seed),
    ));

    for (name, f, aaf) in standard_fibrations(x)? {
        out.extend(initiality(&name, &f, &aaf, &q, &canonical, &fragment, cfg));
    }

    out.extend(comultiplication_characterisation(
        &q, &qq, &delta, &canonical, &fragment, cfg,
    ));

    Ok(LawReport {
        fragment: fragment.to_json(),
        outcomes: out,
    })
}

fn naturality(
    k: usize,
    m: &ChainMap,
    q: &Arc<Q>,
    delta: &DeltaUnderTest,
    fragment: &Fragment,
) -> Result<Vec<LawOutcome>> {
    let x = q.base();
    if m.source() != x.as_ref() {
        return Err(Error::ObjectMismatch(format!(
            "map {k} does not start at the complex"
        )));
    }
    m.validate()?;
    let ya = Arc::new(m.target().clone());
    let qy = QComplex::new(ya.clone());
    let qm = QMap::new(m.to_morphism_between(x.clone(), ya)?, q.clone(), qy.clone())?;
    let delta_y = Comultiplication::new(&qy);
    let qqm = QMap::new(
        qm.morphism(),
        delta.target().clone(),
        delta_y.target().clone(),
    )?;
    let elem = |dim: usize, g: GenId| QElement::generator(dim, g);

    let mut out = Vec::new();
    out.push(each_generator(
        format!("naturality_counit[{k}]"),
        fragment,
        |dim, g| {
            let e = elem(dim, g);
            let left = qy.epsilon(&qm.apply(&e)?);
            let right = m.apply(dim, &q.epsilon(&e))?;
            Ok((left != right)
                .then(|| witness(q, dim, g, left.to_u64().into(), right.to_u64().into()))
                .flatten())
        },
    ));
    out.push(each_generator(
        format!("naturality_comultiplication[{k}]"),
        fragment,
        |dim, g| {
            let e = elem(dim, g);
            let left = delta_y.apply(&qm.apply(&e)?)?;
            let right = qqm.apply(&delta.apply(&e)?)?;
            let qqy = delta_y.target();
            Ok((left != right)
                .then(|| {
                    witness(
                        q,
                        dim,
                        g,
                        qqy.elem_json(dim, &left),
                        qqy.elem_json(dim, &right),
                    )
                })
                .flatten())
        },
    ));
    out.push(each_generator(
        format!("functor_chain_map[{k}]"),
        fragment,
        |dim, g| {
            if dim == 0 {
                return Ok(None);
            }
            let e = elem(dim, g);
            let left = qy.q_diff(&qm.apply(&e)?)?;
            let right = qm.apply(&q.q_diff(&e)?)?;
            Ok((left != right)
                .then(|| {
                    witness(
                        q,
                        dim,
                        g,
                        qy.elem_json(dim - 1, &left),
                        qy.elem_json(dim - 1, &right),
                    )
                })
                .flatten())
        },
    ));
    Ok(out)
}

fn initiality(
    name: &str,
    f: &ChainMap,
    aaf: &Aaf,
    q: &Arc<Q>,
    canonical: &ChoiceOfLiftings<Q, ChainComplex>,
    fragment: &Fragment,
    cfg: &LawConfig,
) -> Vec<LawOutcome> {
    let h = match InitialMorphism::new(q.clone(), aaf.clone()) {
        Ok(h) => h,
        Err(e) => return vec![failed(format!("initiality[{name}]"), e)],
    };
    let y = aaf.source().clone();
    let elem = |dim: usize, g: GenId| QElement::generator(dim, g);
    let mut out = Vec::new();
    out.push(each_generator(
        format!("initiality[{name}]/over_base"),
        fragment,
        |dim, g| {
            let e = elem(dim, g);
            let left = f.apply(dim, &h.apply(&e)?)?;
            let right = q.epsilon(&e);
            Ok((left != right)
                .then(|| witness(q, dim, g, left.to_u64().into(), right.to_u64().into()))
                .flatten())
        },
    ));
    out.push(each_generator(
        format!("initiality[{name}]/chain_map"),
        fragment,
        |dim, g| {
            if dim == 0 {
                return Ok(None);
            }
            let e = elem(dim, g);
            let left = y.diff(dim, &h.apply(&e)?);
            let right = h.apply(&q.q_diff(&e)?)?;
            Ok((left != right)
                .then(|| witness(q, dim, g, left.to_u64().into(), right.to_u64().into()))
                .flatten())
        },
    ));
    out.push(from_coverage(
        format!("initiality[{name}]/preserves_liftings"),
        verify_aaf_morphism(
            &h.morphism(),
            canonical,
            aaf,
            cfg.max_elems,
            cfg.samples,
            cfg.seed,
        ),
    ));
    out.push(each_generator(
        format!("initiality[{name}]/uniqueness"),
        fragment,
        |dim, g| {
            let gen = q.generator(g);
            let candidates = lifting_preserving_values(q, aaf, &h, dim, g, cfg.max_elems)?;
            let expected = h.on_generator(g)?;
            Ok((candidates != [expected.clone()]).then(|| {
                json!({
                    "dim": dim,
                    "gen": q.gen_key(g),
                    "x": gen.x().to_u64(),
                    "candidates": candidates.iter().map(|c| c.to_u64()).collect::<Vec<_>>(),
                    "initial": expected.to_u64(),
                })
            }))
        },
    ));
    out
}

/// Every `y` in `Y_dim` that a lifting-preserving chain map `u` over the base,
/// agreeing with `h` below dimension `dim`, could send the generator `g` to:
/// `f(y) = ε(g)`, `d(y) = h(z)` and `y = k(x, h(z))` (resp. `y = k_0(x)`).
/// Found by enumerating all of `Y_dim`.
pub fn lifting_preserving_values(
    q: &Q,
    aaf: &Aaf,
    h: &InitialMorphism<ChainComplex, ChainComplex>,
    dim: usize,
    g: GenId,
    limit: usize,
) -> Result<Vec<crate::algebra::Vector>> {
    let y = aaf.source();
    let gen = q.generator(g);
    let below = match gen.z() {
        None => None,
        Some(z) => Some(h.apply(z)?),
    };
    let mut found = Vec::new();
    for cand in y.elements(dim, limit)? {
        if &aaf.map().apply(dim, &cand)? != gen.x() {
            continue;
        }
        let forced = match &below {
            None => aaf.k0(gen.x())?,
            Some(hz) => {
                if &y.diff(dim, &cand) != hz {
                    continue;
                }
                aaf.k(dim, gen.x(), hz)?
            }
        };
        if cand == forced {
            found.push(cand);
        }
    }
    Ok(found)
}

fn comultiplication_characterisation(
    q: &Arc<Q>,
    qq: &Arc<QQ>,
    delta: &DeltaUnderTest,
    canonical: &ChoiceOfLiftings<Q, ChainComplex>,
    fragment: &Fragment,
    cfg: &LawConfig,
) -> Vec<LawOutcome> {
    let composed = match compose_liftings(&canonical_liftings(qq), canonical) {
        Ok(c) => c,
        Err(e) => return vec![failed("comultiplication_initial", e)],
    };
    let h = match InitialMorphism::new(q.clone(), composed.clone()) {
        Ok(h) => h,
        Err(e) => return vec![failed("comultiplication_initial", e)],
    };
    vec![
        each_generator("comultiplication_initial", fragment, |dim, g| {
            let e = QElement::generator(dim, g);
            let (left, right) = (delta.apply(&e)?, h.apply(&e)?);
            Ok((left != right)
                .then(|| {
                    witness(
                        q,
                        dim,
                        g,
                        qq.elem_json(dim, &left),
                        qq.elem_json(dim, &right),
                    )
                })
                .flatten())
        }),
        from_coverage(
            "comultiplication_preserves_liftings",
            verify_aaf_morphism(
                &delta.morphism(),
                canonical,
                &composed,
                cfg.max_elems,
                cfg.samples,
                cfg.seed,
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;

    #[test]
    fn point_passes_everything() {
        let f2 = PrimeField::new(2).unwrap();
        let x = ChainComplex::concentrated(f2, 0, 1, 1);
        let report = run_q_laws(&x, &[ChainMap::identity(&x)], &LawConfig::default()).unwrap();
        assert!(report.passed(), "{}", report.to_json());
    }

    #[test]
    fn corrupted_delta_breaks_coassociativity() {
        let f2 = PrimeField::new(2).unwrap();
        let x = ChainComplex::concentrated(f2, 0, 1, 1);
        let cfg = LawConfig {
            corrupt_delta: true,
            ..LawConfig::default()
        };
        let report = run_q_laws(&x, &[], &cfg).unwrap();
        let coassoc = report.outcome("coassociativity").unwrap();
        assert!(!coassoc.passed);
        assert_eq!(coassoc.witness.as_ref().unwrap()["dim"], 0);
    }
}
