//! The `cofib` command line. Every command prints one JSON document on
//! stdout; exit status 0 on success, 1 on a law or validation failure, 2 on
//! an I/O or parse failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::io;
use crate::kleisli::{compose_hom, compose_hom_via_qq, hom_equal, Homomorphism};
use crate::laws::{run_q_laws, LawConfig};
use crate::qcomonad::QComplex;
use crate::soa;
use crate::wfs::solve_lifting;

#[derive(Parser, Debug)]
#[command(
    name = "cofib",
    version,
    about = "Cofibrant replacement of chain complexes over Z/p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Guards {
    /// Highest dimension of QX to build.
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    /// Largest set enumerated exhaustively.
    #[arg(long, default_value_t = 4096)]
    pub max_elems: usize,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Sampling {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generators drawn in a dimension past the guard.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Fail instead of sampling past the guard.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate complex and chain-map files.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Build QX up to --max-dim.
    QMaterialize {
        path: PathBuf,
        #[command(flatten)]
        guards: Guards,
    },
    /// Check the comonad laws and the lifting properties of QX.
    QLaws {
        path: PathBuf,
        /// Chain maps out of the complex to check naturality against.
        #[arg(long = "map")]
        maps: Vec<PathBuf>,
        #[command(flatten)]
        guards: Guards,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, hide = true)]
        debug_corrupt_delta: bool,
    },
    /// Solve a lifting square against a tabulated fibration.
    Lift { aaf: PathBuf, square: PathBuf },
    /// Compose two homomorphism fixtures, f first.
    ComposeHom {
        f: PathBuf,
        g: PathBuf,
        /// Also check the unit and associativity laws around the composite.
        #[arg(long)]
        check_assoc: bool,
        #[command(flatten)]
        guards: Guards,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// One step of the small-object factorisation of a chain map.
    SoaStep {
        map: PathBuf,
        #[arg(long, default_value_t = 4096)]
        max_elems: usize,
    },
    /// Print the version, commands and defaults.
    Info,
}

/// Outcome of a command: the report and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { code: 0, report }
    }

    fn check(passed: bool, report: Value) -> Self {
        Outcome {
            code: if passed { 0 } else { 1 },
            report,
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            report: e.to_json(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn with_ok(mut v: Value, ok: bool) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("ok".into(), ok.into());
    }
    v
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> std::result::Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(execute(&cli.command))
}

pub fn execute(cmd: &Command) -> Outcome {
    let result = match cmd {
        Command::Validate { paths } => Ok(validate(paths)),
        Command::QMaterialize { path, guards } => q_materialize(path, guards),
        Command::QLaws {
            path,
            maps,
            guards,
            sampling,
            debug_corrupt_delta,
        } => q_laws(path, maps, guards, sampling, *debug_corrupt_delta),
        Command::Lift { aaf, square } => lift(aaf, square),
        Command::ComposeHom {
            f,
            g,
            check_assoc,
            guards,
            sampling,
        } => compose(f, g, *check_assoc, guards, sampling),
        Command::SoaStep { map, max_elems } => soa_step(map, *max_elems),
        Command::Info => Ok(Outcome::ok(info())),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn validate_one(path: &Path) -> Result<&'static str> {
    let v = io::read_json(path)?;
    if v.get("comps").is_some() {
        io::map_from_json(&v, &io::base_dir(path))?;
        Ok("map")
    } else if v.get("p").is_some() {
        io::complex_from_json(&v)?;
        Ok("complex")
    } else {
        Err(Error::Parse(format!(
            "{}: neither a complex nor a chain map",
            path.display()
        )))
    }
}

fn validate(paths: &[PathBuf]) -> Outcome {
    let results: Vec<(String, Result<&'static str>)> = paths
        .iter()
        .map(|p| (p.display().to_string(), validate_one(p)))
        .collect();
    let code = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().err())
        .map(exit_code)
        .max()
        .unwrap_or(0);
    let entry = |path: &str, r: &Result<&'static str>| match r {
        Ok(kind) => json!({ "ok": true, "path": path, "kind": kind }),
        Err(e) => {
            let mut v = e.to_json();
            v["path"] = json!(path);
            v
        }
    };
    let report = if let [(path, r)] = results.as_slice() {
        entry(path, r)
    } else {
        json!({
            "ok": code == 0,
            "results": results.iter().map(|(p, r)| entry(p, r)).collect::<Vec<_>>(),
        })
    };
    Outcome { code, report }
}

fn q_materialize(path: &Path, guards: &Guards) -> Result<Outcome> {
    let x = io::complex_from_json(&io::read_json(path)?)?;
    let upto = guards.max_dim.min(x.trunc());
    let q = QComplex::new(Arc::new(x));
    let m = q.materialize(upto, guards.max_elems)?;
    Ok(Outcome::ok(with_ok(m.to_json(&q), true)))
}

fn q_laws(
    path: &Path,
    maps: &[PathBuf],
    guards: &Guards,
    sampling: &Sampling,
    corrupt: bool,
) -> Result<Outcome> {
    let x = io::complex_from_json(&io::read_json(path)?)?;
    let maps: Vec<ChainMap> = maps
        .iter()
        .map(|p| io::map_from_json(&io::read_json(p)?, &io::base_dir(p)))
        .collect::<Result<_>>()?;
    let cfg = LawConfig {
        max_dim: guards.max_dim,
        max_elems: guards.max_elems,
        samples: sampling.samples,
        seed: sampling.seed,
        strict: sampling.strict,
        corrupt_delta: corrupt,
    };
    let report = run_q_laws(&x, &maps, &cfg)?;
    Ok(Outcome::check(report.passed(), report.to_json()))
}

fn lift(aaf_path: &Path, square_path: &Path) -> Result<Outcome> {
    let (map, aaf) = io::aaf_from_json(&io::read_json(aaf_path)?, &io::base_dir(aaf_path))?;
    let sq = io::square_from_json(&io::read_json(square_path)?, map.source().field())?;
    let y = solve_lifting(&aaf, &sq)?;
    Ok(Outcome::ok(json!({
        "ok": true,
        "square": io::square_to_json(&sq),
        "filler": y.to_u64(),
    })))
}

fn compose(
    f_path: &Path,
    g_path: &Path,
    check: bool,
    guards: &Guards,
    sampling: &Sampling,
) -> Result<Outcome> {
    let (f, f_upto) = io::hom_from_json(
        &io::read_json(f_path)?,
        &io::base_dir(f_path),
        guards.max_elems,
    )?;
    let (g, g_upto) = io::hom_from_json(
        &io::read_json(g_path)?,
        &io::base_dir(g_path),
        guards.max_elems,
    )?;
    let upto = f_upto.min(g_upto);
    let gf = compose_hom(&g, &f)?;
    let composite = io::hom_to_json(&gf, upto, guards.max_elems)?;
    if !check {
        return Ok(Outcome::ok(json!({ "ok": true, "composite": composite })));
    }
    let eq = |a: &Homomorphism, b: &Homomorphism| {
        hom_equal(
            a,
            b,
            upto,
            guards.max_elems,
            sampling.samples,
            sampling.seed,
            sampling.strict,
        )
    };
    let id_a = Homomorphism::identity(f.domain().clone());
    let id_c = Homomorphism::identity(QComplex::new(g.codomain().clone()));
    let checks = [
        (
            "fused_matches_definition",
            eq(&gf, &compose_hom_via_qq(&g, &f)?)?,
        ),
        ("left_unit", eq(&compose_hom(&id_c, &gf)?, &gf)?),
        ("right_unit", eq(&compose_hom(&gf, &id_a)?, &gf)?),
        (
            "associativity",
            eq(
                &compose_hom(&gf, &id_a)?,
                &compose_hom(&g, &compose_hom(&f, &id_a)?)?,
            )?,
        ),
        (
            "associativity_outer",
            eq(
                &compose_hom(&compose_hom(&id_c, &g)?, &f)?,
                &compose_hom(&id_c, &gf)?,
            )?,
        ),
    ];
    let passed = checks.iter().all(|(_, c)| c.equal);
    let checks: serde_json::Map<String, Value> = checks
        .iter()
        .map(|(name, c)| (name.to_string(), c.to_json()))
        .collect();
    Ok(Outcome::check(
        passed,
        json!({ "ok": passed, "composite": composite, "checks": checks }),
    ))
}

fn soa_step(path: &Path, limit: usize) -> Result<Outcome> {
    let f = io::map_from_json(&io::read_json(path)?, &io::base_dir(path))?;
    let fac = soa::one_step(&f, limit)?;
    let factors = fac.rho.compose(&fac.lambda)? == f;
    let from_zero = f.source().ranks().iter().all(|&r| r == 0);
    let agreement = if from_zero {
        Some(soa::dim0_agreement_with_q(&fac, limit)?)
    } else {
        None
    };
    let passed = factors && agreement != Some(false);
    let mut report = fac.to_json();
    report["rho_after_lambda_is_f"] = factors.into();
    report["dim0_agreement_with_q"] = json!(agreement);
    Ok(Outcome::check(passed, with_ok(report, passed)))
}

fn info() -> Value {
    json!({
        "ok": true,
        "name": "cofib",
        "version": env!("CARGO_PKG_VERSION"),
        "commands": ["validate", "q-materialize", "q-laws", "lift", "compose-hom", "soa-step", "info"],
        "defaults": { "max_dim": 2, "max_elems": 4096, "seed": 0, "samples": 256 },
    })
}
