//! Arithmetic in the local fields `Q_p` and `F_p((t))`.
//!
//! Elements carry an exact valuation together with a finite number of
//! significant residue digits (relative precision). Whenever cancellation
//! destroys every tracked digit the result becomes a zero-like sentinel that
//! only remembers a lower bound for its valuation, so a valuation query never
//! reports an exact answer it cannot justify.

mod element;
mod literal;
mod roots;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use element::{LFElement, EXACT_ZERO};
pub use literal::{format_element, parse_element, parse_expression, Expr};
pub use roots::{legendre_symbol, quadratic_roots, QuadraticRoots};

pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Padic,
    Laurent,
}

/// A local field with prime residue field `F_p`.
///
/// `Padic` is `Q_p` (uniformiser `p`), `Laurent` is `F_p((t))` (uniformiser `t`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    pub kind: FieldKind,
    pub p: u32,
    pub default_precision: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDesc {
    pub fn new(kind: FieldKind, p: u32, default_precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if default_precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Self {
            kind,
            p,
            default_precision,
        })
    }

    pub fn padic(p: u32) -> Result<Self> {
        Self::new(FieldKind::Padic, p, DEFAULT_PRECISION)
    }

    pub fn laurent(p: u32) -> Result<Self> {
        Self::new(FieldKind::Laurent, p, DEFAULT_PRECISION)
    }

    pub fn with_precision(self, default_precision: u32) -> Result<Self> {
        Self::new(self.kind, self.p, default_precision)
    }

    /// Parses `padic:7` or `laurent:5`.
    pub fn parse(spec: &str, default_precision: u32) -> Result<Self> {
        let (kind, p) = spec
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::BadFieldSpec(spec.to_string()))?;
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "padic" | "qp" => FieldKind::Padic,
            "laurent" | "fp((t))" => FieldKind::Laurent,
            _ => return Err(Error::BadFieldSpec(spec.to_string())),
        };
        let p: u32 = p
            .trim()
            .parse()
            .map_err(|_| Error::BadFieldSpec(spec.to_string()))?;
        Self::new(kind, p, default_precision)
    }

    /// Characteristic of the field: 0 for `Q_p`, `p` for `F_p((t))`.
    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Padic => 0,
            FieldKind::Laurent => self.p,
        }
    }

    /// Size of the residue field.
    pub fn q(&self) -> u32 {
        self.p
    }

    pub fn uniformizer_symbol(&self) -> &'static str {
        match self.kind {
            FieldKind::Padic => "p",
            FieldKind::Laurent => "t",
        }
    }

    /// Same field, ignoring the default precision.
    pub fn same_field(&self, other: &FieldDesc) -> bool {
        self.kind == other.kind && self.p == other.p
    }

    pub fn zero(&self) -> LFElement {
        LFElement::exact_zero(*self)
    }

    pub fn one(&self) -> LFElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> LFElement {
        LFElement::from_integer(*self, &n.into())
    }

    /// `pi^k` for the uniformiser `pi`.
    pub fn uniformizer_pow(&self, k: i64) -> LFElement {
        LFElement::uniformizer_pow(*self, k)
    }

    /// The image of `num/den`.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<LFElement> {
        LFElement::from_rational(*self, &num.into(), &den.into())
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Padic => write!(f, "padic:{}", self.p),
            FieldKind::Laurent => write!(f, "laurent:{}", self.p),
        }
    }
}

impl Serialize for FieldDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A valuation known exactly, or only bounded below because every tracked
/// digit cancelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValResult {
    Exact(i64),
    AtLeast(i64),
}

impl ValResult {
    /// Lower-bound semantics: `Exact(n)` is below `AtLeast(m)` iff `n < m`.
    pub fn min(self, other: ValResult) -> ValResult {
        use ValResult::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a < b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    /// The guaranteed lower bound.
    pub fn lower_bound(self) -> i64 {
        match self {
            ValResult::Exact(n) | ValResult::AtLeast(n) => n,
        }
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            ValResult::Exact(n) => Some(n),
            ValResult::AtLeast(_) => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ValResult::Exact(_))
    }

    /// Whether the valuation is provably `> bound`; `None` if precision
    /// does not decide it.
    pub fn exceeds(self, bound: i64) -> Option<bool> {
        match self {
            ValResult::Exact(n) => Some(n > bound),
            ValResult::AtLeast(n) if n > bound => Some(true),
            ValResult::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for ValResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValResult::Exact(n) => write!(f, "{n}"),
            ValResult::AtLeast(n) if *n == EXACT_ZERO => write!(f, ">= inf"),
            ValResult::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

impl Serialize for ValResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        match self {
            ValResult::Exact(n) => map.serialize_entry("exact", n)?,
            ValResult::AtLeast(n) if *n == EXACT_ZERO => {
                map.serialize_entry("at_least", &Option::<i64>::None)?
            }
            ValResult::AtLeast(n) => map.serialize_entry("at_least", n)?,
        }
        map.end()
    }
}
