//! `SL2(K)`: matrices, trace invariants and the elliptic/hyperbolic dichotomy.

mod finite_order;

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::localfield::{format_element, parse_element, FieldDesc, LFElement, ValResult};

pub use finite_order::{
    candidate_orders, compute_m_k, finite_order, finite_order_traces, CatalogEntry, FiniteOrder,
    FiniteOrderCatalog,
};

/// A 2x2 matrix of determinant one, `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    a: LFElement,
    b: LFElement,
    c: LFElement,
    d: LFElement,
}

impl Mat2 {
    /// Checks that `ad - bc` agrees with 1 on every valid digit.
    pub fn new(a: LFElement, b: LFElement, c: LFElement, d: LFElement) -> Result<Self> {
        let f = a.field();
        if [&b, &c, &d].iter().any(|x| !x.field().same_field(&f)) {
            return Err(Error::FieldMismatch);
        }
        let m = Self { a, b, c, d };
        let det = m.det();
        if !det.agrees_with(&f.one()) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(m)
    }

    fn raw(a: LFElement, b: LFElement, c: LFElement, d: LFElement) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity(field: FieldDesc) -> Self {
        Self::raw(field.one(), field.zero(), field.zero(), field.one())
    }

    pub fn from_ints(field: FieldDesc, m: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(
            field.from_int(m[0][0]),
            field.from_int(m[0][1]),
            field.from_int(m[1][0]),
            field.from_int(m[1][1]),
        )
    }

    /// Entries given as element literals, row by row.
    pub fn from_literals(field: FieldDesc, m: [[&str; 2]; 2]) -> Result<Self> {
        Self::new(
            parse_element(m[0][0], field)?,
            parse_element(m[0][1], field)?,
            parse_element(m[1][0], field)?,
            parse_element(m[1][1], field)?,
        )
    }

    /// `diag(x, 1/x)`.
    pub fn diagonal(x: &LFElement) -> Result<Self> {
        let f = x.field();
        Ok(Self::raw(x.clone(), f.zero(), f.zero(), x.inv()?))
    }

    pub fn field(&self) -> FieldDesc {
        self.a.field()
    }

    pub fn a(&self) -> &LFElement {
        &self.a
    }
    pub fn b(&self) -> &LFElement {
        &self.b
    }
    pub fn c(&self) -> &LFElement {
        &self.c
    }
    pub fn d(&self) -> &LFElement {
        &self.d
    }

    pub fn entries(&self) -> [&LFElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> LFElement {
        &self.a + &self.d
    }

    pub fn det(&self) -> LFElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Self::raw(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    /// Adjugate; valid because the determinant is one.
    pub fn inv(&self) -> Mat2 {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Mat2 {
        Self::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Binary exponentiation; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Mat2 {
        let mut base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2::identity(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `M A M^-1`.
    pub fn conjugate_by(&self, m: &Mat2) -> Mat2 {
        m.mul(self).mul(&m.inv())
    }

    /// Entrywise agreement on all shared valid digits.
    pub fn agrees_with(&self, o: &Mat2) -> bool {
        self.entries()
            .iter()
            .zip(o.entries())
            .all(|(x, y)| x.agrees_with(y))
    }

    pub fn is_identity_like(&self) -> bool {
        self.agrees_with(&Mat2::identity(self.field()))
    }

    /// `+-I` at working precision.
    pub fn is_central_like(&self) -> bool {
        self.b.is_zero_like() && self.c.is_zero_like() && self.a.agrees_with(&self.d)
    }

    /// Minimum entry valuation of `self - I`.
    pub fn distance_to_identity(&self) -> ValResult {
        let one = self.field().one();
        let diag = [&self.a - &one, &self.d - &one];
        diag.iter()
            .chain([&self.b, &self.c])
            .map(|x| x.valuation())
            .reduce(ValResult::min)
            .unwrap()
    }

    /// Minimum entry valuation; used as the lattice-scaling exponent.
    pub fn min_entry_valuation(&self) -> ValResult {
        self.entries()
            .iter()
            .map(|x| x.valuation())
            .reduce(ValResult::min)
            .unwrap()
    }

    pub fn to_literals(&self) -> [[String; 2]; 2] {
        [
            [format_element(&self.a), format_element(&self.b)],
            [format_element(&self.c), format_element(&self.d)],
        ]
    }
}

/// `[A, B] = A B A^-1 B^-1`.
pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    a.mul(b).mul(&a.inv()).mul(&b.inv())
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.to_literals();
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_literals();
        let mut seq = s.serialize_seq(Some(2))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementKind {
    Hyperbolic {
        length: u64,
    },
    Elliptic,
    /// Trace valuation only bounded below by a negative number.
    Undetermined,
}

/// Elliptic/hyperbolic classification with translation length `-2 min(0, v(tr))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementClass {
    pub kind: ElementKind,
    pub trace_valuation: ValResult,
}

impl ElementClass {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.kind, ElementKind::Hyperbolic { .. })
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self.kind, ElementKind::Elliptic)
    }

    /// Translation length; `None` when undetermined.
    pub fn translation_length(&self) -> Option<u64> {
        match self.kind {
            ElementKind::Hyperbolic { length } => Some(length),
            ElementKind::Elliptic => Some(0),
            ElementKind::Undetermined => None,
        }
    }
}

pub fn classify(m: &Mat2) -> ElementClass {
    let trace_valuation = m.trace().valuation();
    let kind = match trace_valuation {
        ValResult::Exact(n) if n < 0 => ElementKind::Hyperbolic {
            length: (-2 * n) as u64,
        },
        ValResult::Exact(_) => ElementKind::Elliptic,
        ValResult::AtLeast(n) if n >= 0 => ElementKind::Elliptic,
        ValResult::AtLeast(_) => ElementKind::Undetermined,
    };
    ElementClass {
        kind,
        trace_valuation,
    }
}
