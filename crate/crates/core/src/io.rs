//! JSON file formats.
//!
//! * complex: `{"p", "trunc", "ranks", "diffs"}`, `diffs[i-1]` the matrix of
//!   `d_i` as a list of rows;
//! * chain map: `{"source", "target", "comps"}`, where a complex reference is
//!   either an inline complex or a path relative to the referring file;
//! * lifting square: `{"i", "z" (or null), "x"}`;
//! * fibration table: `{"map", "k0": [{"x", "y"}], "k": [{"i", "x", "z", "y"}]}`;
//! * homomorphism fixture: `{"domain", "codomain", "upto",
//!   "values": [{"dim", "gen", "value"}]}` with generator keys as produced by
//!   [`QComplex::gen_key`].

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{Matrix, PrimeField, Vector};
use crate::complex::{vector_from_json, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::graded::Graded;
use crate::kleisli::Homomorphism;
use crate::qcomonad::QComplex;
use crate::wfs::{all_compatible_pairs, solve_lifting, ChoiceOfLiftings, LiftingSquare};

/// Reads and parses a JSON file. Syntax errors carry line and column.
pub fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse<'a, T: Deserialize<'a>>(v: &'a Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[derive(Deserialize)]
struct ComplexJson {
    p: u64,
    trunc: usize,
    ranks: Vec<usize>,
    diffs: Vec<Vec<Vec<u64>>>,
}

fn matrix_from_rows(
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: &[Vec<u64>],
    dim: usize,
) -> Result<Matrix> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch { dim });
    }
    if let Some(e) = data.iter().flatten().find(|&&e| e >= field.p() as u64) {
        return Err(Error::Parse(format!(
            "entry {e} is not a residue mod {}",
            field.p()
        )));
    }
    Matrix::from_rows(field, cols, data)
}

pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let c: ComplexJson = parse(v, "complex")?;
    let field = PrimeField::new(c.p)?;
    if c.ranks.len() != c.trunc + 1 {
        return Err(Error::ShapeMismatch {
            dim: c.ranks.len().min(c.trunc + 1),
        });
    }
    if c.diffs.len() != c.trunc {
        return Err(Error::ShapeMismatch {
            dim: c.diffs.len().min(c.trunc) + 1,
        });
    }
    let diffs = c
        .diffs
        .iter()
        .enumerate()
        .map(|(k, d)| matrix_from_rows(field, c.ranks[k], c.ranks[k + 1], d, k + 1))
        .collect::<Result<Vec<_>>>()?;
    ChainComplex::new(field, c.ranks, diffs)
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    json!({
        "p": c.field().p(),
        "trunc": c.trunc(),
        "ranks": c.ranks(),
        "diffs": c.diffs().iter().map(Matrix::to_rows).collect::<Vec<_>>(),
    })
}

/// An inline complex or a path to one, relative to `base`.
pub fn resolve_complex(v: &Value, base: &Path) -> Result<ChainComplex> {
    match v {
        Value::String(rel) => {
            let path = base.join(rel);
            complex_from_json(&read_json(&path)?)
        }
        other => complex_from_json(other),
    }
}

pub fn map_from_json(v: &Value, base: &Path) -> Result<ChainMap> {
    #[derive(Deserialize)]
    struct MapJson {
        source: Value,
        target: Value,
        comps: Vec<Vec<Vec<u64>>>,
    }
    let m: MapJson = parse(v, "chain map")?;
    let source = resolve_complex(&m.source, base)?;
    let target = resolve_complex(&m.target, base)?;
    if source.field() != target.field() {
        return Err(Error::FieldMismatch {
            left: source.field().p(),
            right: target.field().p(),
        });
    }
    if source.trunc() != target.trunc() || m.comps.len() != source.trunc() + 1 {
        return Err(Error::ShapeMismatch {
            dim: m.comps.len().min(source.trunc().min(target.trunc()) + 1),
        });
    }
    let comps = m
        .comps
        .iter()
        .enumerate()
        .map(|(i, c)| matrix_from_rows(source.field(), target.rank_at(i), source.rank_at(i), c, i))
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(source, target, comps)
}

pub fn map_to_json(m: &ChainMap) -> Value {
    json!({
        "source": complex_to_json(m.source()),
        "target": complex_to_json(m.target()),
        "comps": m.comps().iter().map(Matrix::to_rows).collect::<Vec<_>>(),
    })
}

pub fn square_from_json(v: &Value, field: PrimeField) -> Result<LiftingSquare<Vector, Vector>> {
    #[derive(Deserialize)]
    struct SquareJson {
        i: usize,
        z: Option<Value>,
        x: Value,
    }
    let s: SquareJson = parse(v, "lifting square")?;
    let z =
        s.z.as_ref()
            .map(|z| vector_from_json(field, z))
            .transpose()?;
    Ok(LiftingSquare::new(s.i, z, vector_from_json(field, &s.x)?))
}

pub fn square_to_json(sq: &LiftingSquare<Vector, Vector>) -> Value {
    json!({
        "i": sq.dim,
        "z": sq.top.as_ref().map(Vector::to_u64),
        "x": sq.bottom.to_u64(),
    })
}

type Aaf = ChoiceOfLiftings<ChainComplex, ChainComplex>;

/// A fibration given by explicit lifting tables. Squares missing from the
/// table evaluate to `Undefined`.
pub fn aaf_from_json(v: &Value, base: &Path) -> Result<(ChainMap, Aaf)> {
    #[derive(Deserialize)]
    struct K0 {
        x: Value,
        y: Value,
    }
    #[derive(Deserialize)]
    struct K {
        i: usize,
        x: Value,
        z: Value,
        y: Value,
    }
    #[derive(Deserialize)]
    struct AafJson {
        map: Value,
        k0: Vec<K0>,
        k: Vec<K>,
    }
    let a: AafJson = parse(v, "fibration table")?;
    let map = map_from_json(&a.map, base)?;
    let field = map.source().field();
    let mut k0 = HashMap::new();
    for e in &a.k0 {
        k0.insert(
            vector_from_json(field, &e.x)?,
            vector_from_json(field, &e.y)?,
        );
    }
    let mut k = HashMap::new();
    for e in &a.k {
        let key = (
            e.i,
            vector_from_json(field, &e.x)?,
            vector_from_json(field, &e.z)?,
        );
        k.insert(key, vector_from_json(field, &e.y)?);
    }
    let aaf = ChoiceOfLiftings::new(
        map.to_morphism(),
        move |x: &Vector| {
            k0.get(x).cloned().ok_or_else(|| Error::Undefined {
                dim: 0,
                key: json!({ "x": x.to_u64() }),
            })
        },
        move |dim, x: &Vector, z: &Vector| {
            k.get(&(dim, x.clone(), z.clone()))
                .cloned()
                .ok_or_else(|| Error::Undefined {
                    dim,
                    key: json!({ "x": x.to_u64(), "z": z.to_u64() }),
                })
        },
    );
    Ok((map, aaf))
}

/// Tabulates `aaf` on every compatible pair in every dimension.
pub fn aaf_to_json(map: &ChainMap, aaf: &Aaf, limit: usize) -> Result<Value> {
    let mut k0 = Vec::new();
    let mut k = Vec::new();
    for dim in 0..=map.target().trunc() {
        for (x, z) in all_compatible_pairs(aaf.map(), dim, limit)? {
            let y = solve_lifting(aaf, &LiftingSquare::new(dim, z.clone(), x.clone()))?;
            match z {
                None => k0.push(json!({ "x": x.to_u64(), "y": y.to_u64() })),
                Some(z) => k.push(json!({
                    "i": dim,
                    "x": x.to_u64(),
                    "z": z.to_u64(),
                    "y": y.to_u64(),
                })),
            }
        }
    }
    Ok(json!({ "map": map_to_json(map), "k0": k0, "k": k }))
}

/// Loads a homomorphism fixture, returning it with its stated `upto`. The
/// table must cover every generator up to `upto` and obey the chain-map law.
pub fn hom_from_json(v: &Value, base: &Path, limit: usize) -> Result<(Homomorphism, usize)> {
    #[derive(Deserialize)]
    struct Entry {
        dim: usize,
        gen: Value,
        value: Value,
    }
    #[derive(Deserialize)]
    struct HomJson {
        domain: Value,
        codomain: Value,
        upto: usize,
        values: Vec<Entry>,
    }
    let h: HomJson = parse(v, "homomorphism")?;
    let domain = Arc::new(resolve_complex(&h.domain, base)?);
    let codomain = Arc::new(resolve_complex(&h.codomain, base)?);
    if domain.field() != codomain.field() {
        return Err(Error::FieldMismatch {
            left: domain.field().p(),
            right: codomain.field().p(),
        });
    }
    let q = QComplex::new(domain);
    let mut table = HashMap::new();
    for e in &h.values {
        let g = q.parse_key(e.dim, &e.gen)?;
        let value = codomain.elem_from_json(e.dim, &e.value)?;
        table.insert(g, value);
    }
    let m = q.materialize(h.upto, limit)?;
    for (dim, gens) in m.generators.iter().enumerate() {
        if let Some(&g) = gens.iter().find(|g| !table.contains_key(g)) {
            return Err(Error::Undefined {
                dim,
                key: q.gen_key(g),
            });
        }
    }
    Ok((Homomorphism::from_table(q, codomain, table)?, h.upto))
}

pub fn hom_to_json(h: &Homomorphism, upto: usize, limit: usize) -> Result<Value> {
    let values: Vec<Value> = h
        .to_table(upto, limit)?
        .into_iter()
        .map(|(dim, g, v)| {
            json!({
                "dim": dim,
                "gen": h.domain().gen_key(g),
                "value": v.to_u64(),
            })
        })
        .collect();
    Ok(json!({
        "domain": complex_to_json(h.domain().base()),
        "codomain": complex_to_json(h.codomain()),
        "upto": upto,
        "values": values,
    }))
}

/// Directory against which relative references inside `path` resolve.
pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}
