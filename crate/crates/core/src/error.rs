use serde_json::Value;
use thiserror::Error;

/// Errors raised by the algebraic constructions.
///
/// Witnesses are carried as JSON so that reports can embed them verbatim,
/// whatever complex (base, `QX`, `QQX`, ...) they were found in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: Z/{left} against Z/{right}")]
    FieldMismatch { left: u32, right: u32 },
    #[error("matrix is not surjective: rank {rank} < {rows} rows")]
    NotSurjective { rank: usize, rows: usize },
    #[error("size guard exceeded in dimension {dim}: {required} required, limit {limit}")]
    SizeGuardExceeded {
        dim: usize,
        required: Count,
        limit: usize,
    },
    #[error("differential shapes do not match ranks at dimension {dim}")]
    ShapeMismatch { dim: usize },
    #[error("d_{0} . d_{next} is not zero", next = .0 + 1)]
    SquareNotZero(usize),
    #[error("chain map square fails to commute at dimension {0}")]
    NotChainMap(usize),
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("dimension {dim} is outside 0..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("boundary witness in dimension {dim} is not a cycle")]
    NotACycle { dim: usize },
    #[error("counit of the boundary witness differs from d(x) in dimension {dim}")]
    CounitMismatch { dim: usize },
    #[error("dimension {dim} has not been materialized")]
    NotMaterialized { dim: usize },
    #[error("unknown generator in dimension {dim}: {key}")]
    UnknownGenerator { dim: usize, key: Value },
    #[error("lifting square in dimension {dim} does not commute")]
    IncompatibleSquare { dim: usize },
    #[error("section law violated in dimension {dim} at {witness}")]
    SectionLawViolated { dim: usize, witness: Value },
    #[error("map does not commute over the base in dimension {dim} at {witness}")]
    NotOverX { dim: usize, witness: Value },
    #[error("chosen liftings not preserved in dimension {dim} at {witness}")]
    LiftingNotPreserved { dim: usize, witness: Value },
    #[error("value undefined in dimension {dim} at {key}")]
    Undefined { dim: usize, key: Value },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable variant name used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::NotSurjective { .. } => "NotSurjective",
            Error::SizeGuardExceeded { .. } => "SizeGuardExceeded",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::SquareNotZero(_) => "SquareNotZero",
            Error::NotChainMap(_) => "NotChainMap",
            Error::ObjectMismatch(_) => "ObjectMismatch",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::NotACycle { .. } => "NotACycle",
            Error::CounitMismatch { .. } => "CounitMismatch",
            Error::NotMaterialized { .. } => "NotMaterialized",
            Error::UnknownGenerator { .. } => "UnknownGenerator",
            Error::IncompatibleSquare { .. } => "IncompatibleSquare",
            Error::SectionLawViolated { .. } => "SectionLawViolated",
            Error::NotOverX { .. } => "NotOverX",
            Error::LiftingNotPreserved { .. } => "LiftingNotPreserved",
            Error::Undefined { .. } => "Undefined",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// The dimension an error refers to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Error::SizeGuardExceeded { dim, .. }
            | Error::ShapeMismatch { dim }
            | Error::DimensionOutOfRange { dim, .. }
            | Error::NotACycle { dim }
            | Error::CounitMismatch { dim }
            | Error::NotMaterialized { dim }
            | Error::UnknownGenerator { dim, .. }
            | Error::IncompatibleSquare { dim }
            | Error::SectionLawViolated { dim, .. }
            | Error::NotOverX { dim, .. }
            | Error::LiftingNotPreserved { dim, .. }
            | Error::Undefined { dim, .. } => Some(*dim),
            Error::SquareNotZero(dim) | Error::NotChainMap(dim) => Some(*dim),
            _ => None,
        }
    }

    /// JSON rendering: `{"ok": false, "error": kind, "dim": .., "message": ..}` plus
    /// any witness.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("ok".into(), Value::Bool(false));
        obj.insert("error".into(), Value::String(self.kind().into()));
        if let Some(dim) = self.dim() {
            obj.insert("dim".into(), dim.into());
        }
        match self {
            Error::SectionLawViolated { witness, .. }
            | Error::NotOverX { witness, .. }
            | Error::LiftingNotPreserved { witness, .. } => {
                obj.insert("witness".into(), witness.clone());
            }
            Error::SizeGuardExceeded {
                required, limit, ..
            } => {
                obj.insert("required".into(), required.to_json());
                obj.insert("limit".into(), (*limit).into());
            }
            _ => {}
        }
        obj.insert("message".into(), Value::String(self.to_string()));
        Value::Object(obj)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A possibly astronomically large element count, saturating at `u128::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Count(pub u128);

impl Count {
    pub fn pow(base: u64, exp: usize) -> Count {
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc.saturating_mul(base as u128);
        }
        Count(acc)
    }

    pub fn saturated(self) -> bool {
        self.0 == u128::MAX
    }

    pub fn exceeds(self, limit: usize) -> bool {
        self.0 > limit as u128
    }

    pub fn to_json(self) -> Value {
        if self.saturated() {
            Value::String(">=2^128".into())
        } else if let Ok(n) = u64::try_from(self.0) {
            Value::from(n)
        } else {
            Value::String(self.0.to_string())
        }
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.saturated() {
            write!(f, ">= 2^128")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::ops::Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0.saturating_mul(rhs.0))
    }
}

impl std::ops::Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0.saturating_add(rhs.0))
    }
}
