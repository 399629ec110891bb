//! Browser bindings. Every entry point takes and returns JSON text; errors
//! come back as `{"ok": false, "error": .., "message": ..}`.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use cofibrant::complex::ChainMap;
use cofibrant::io;
use cofibrant::laws::{run_q_laws, LawConfig};
use cofibrant::qcomonad::QComplex;
use cofibrant::{soa, ChainComplex, Error};

/// Largest set the page will enumerate.
pub const PAGE_LIMIT: usize = 1024;

fn parse_complex(text: &str) -> Result<ChainComplex, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    io::complex_from_json(&v)
}

fn render(result: Result<Value, Error>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => {
            let mut v = e.to_json();
            v["ok"] = false.into();
            v.to_string()
        }
    }
}

/// Generators, differentials and counit of `QX` up to `max_dim`.
#[wasm_bindgen]
pub fn materialize_q(complex: &str, max_dim: usize) -> String {
    render((|| {
        let x = parse_complex(complex)?;
        let upto = max_dim.min(x.trunc());
        let q = QComplex::new(Arc::new(x));
        let mut out = q.materialize(upto, PAGE_LIMIT)?.to_json(&q);
        out["ok"] = true.into();
        Ok(out)
    })())
}

/// The comonad law suite on `QX`, sampled past the page limit.
#[wasm_bindgen]
pub fn check_laws(complex: &str, seed: u64, corrupt_delta: bool) -> String {
    render((|| {
        let x = parse_complex(complex)?;
        let cfg = LawConfig {
            max_elems: PAGE_LIMIT,
            samples: 64,
            seed,
            corrupt_delta,
            ..LawConfig::default()
        };
        Ok(run_q_laws(&x, &[ChainMap::identity(&x)], &cfg)?.to_json())
    })())
}

/// One small-object step for `0 -> X`, with the comparison against `(QX)_0`.
#[wasm_bindgen]
pub fn soa_from_zero(complex: &str) -> String {
    render((|| {
        let x = parse_complex(complex)?;
        let zero = ChainComplex::zero(x.field(), x.trunc());
        let f = ChainMap::zero(&zero, &x)?;
        let fac = soa::one_step(&f, PAGE_LIMIT)?;
        let agrees = soa::dim0_agreement_with_q(&fac, PAGE_LIMIT)?;
        Ok(json!({
            "ok": agrees,
            "ranks": fac.middle().ranks(),
            "ledger": fac.to_json()["ledger"],
            "dim0_agreement_with_q": agrees,
        }))
    })())
}
