//! Finite-order elements of `SL2(K)`: admissible orders, their traces and `M_K`.
//!
//! An element of finite order `n` has eigenvalues `z, 1/z` with `z` a
//! primitive `n`-th root of unity lying in `K` or in a quadratic extension
//! whose nontrivial automorphism inverts `z`. Orders prime to `p` therefore
//! divide `q - 1` or `q + 1`. The remaining orders are:
//!
//! * `Q_2`: 2, 4 (via `Q_2(i)`) and 6; `Q_3`: 3 and 6 (via `Q_3(zeta_3)`);
//! * `F_p((t))`: `p` (unipotent) and `2p` (minus a unipotent, `p` odd).
//!   A non-central semisimple element has a torus as centraliser, so no
//!   other mixed orders occur.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{classify, ElementKind, Mat2};
use crate::localfield::{FieldDesc, FieldKind, LFElement, ValResult};

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Every order a finite-order element of `SL2(K)` can have.
pub fn candidate_orders(field: FieldDesc) -> BTreeSet<u64> {
    let p = field.p as u64;
    let mut orders: BTreeSet<u64> = divisors(p - 1).chain(divisors(p + 1)).collect();
    match field.kind {
        FieldKind::Padic => match p {
            2 => orders.extend([2, 4, 6]),
            3 => orders.extend([3, 6]),
            _ => {}
        },
        FieldKind::Laurent => {
            orders.insert(p);
            if p != 2 {
                orders.insert(2 * p);
            }
        }
    }
    orders
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub order: u64,
    pub trace: LFElement,
    /// `v(trace - 2)`; `None` marks the trace-2 entries excluded from `M_K`.
    pub trace_minus_two_valuation: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteOrderCatalog {
    pub field: FieldDesc,
    pub entries: Vec<CatalogEntry>,
}

/// Multiplicative order of `x` in `F_p[x]/(x^2 - s x + 1)`, assuming `s != +-2`.
fn residue_root_order(s: u64, p: u64) -> u64 {
    // c0 + c1 x, starting from x
    let (mut c0, mut c1) = (0u64, 1u64);
    for k in 1..=(p + 1) {
        if c0 == 1 && c1 == 0 {
            return k;
        }
        // x (c0 + c1 x) = -c1 + (c0 + s c1) x
        (c0, c1) = ((p - c1) % p, (c0 + s * c1) % p);
    }
    0
}

/// `z^k + z^-k` as a polynomial in `t = z + 1/z` (Lucas ladder).
fn dickson(t: &LFElement, k: u64) -> LFElement {
    let two = t.field().from_int(2);
    // (V_m, V_{m+1})
    let (mut lo, mut hi) = (two.clone(), t.clone());
    for bit in (0..64 - k.leading_zeros()).rev() {
        if (k >> bit) & 1 == 1 {
            lo = &(&lo * &hi) - t;
            hi = &(&hi * &hi) - &two;
        } else {
            hi = &(&lo * &hi) - t;
            lo = &(&lo * &lo) - &two;
        }
    }
    lo
}

/// Trace of the Teichmuller root of unity whose residue trace is `s`.
fn lift_trace(field: FieldDesc, s: u64) -> LFElement {
    let t0 = field.from_int(s as i64);
    match field.kind {
        FieldKind::Laurent => t0,
        FieldKind::Padic => {
            // z -> z^p converges to the Teichmuller lift; each step fixes one more digit.
            let mut t = t0;
            for _ in 0..field.default_precision + 2 {
                t = dickson(&t, field.p as u64);
            }
            t
        }
    }
}

fn entry(order: u64, trace: LFElement) -> CatalogEntry {
    let two = trace.field().from_int(2);
    let diff = &trace - &two;
    let trace_minus_two_valuation = match diff.valuation() {
        ValResult::Exact(v) => Some(v),
        ValResult::AtLeast(_) => None,
    };
    CatalogEntry {
        order,
        trace,
        trace_minus_two_valuation,
    }
}

/// Lists, for every admissible order, each trace `z + 1/z` it realises in `K`.
pub fn finite_order_traces(field: FieldDesc) -> FiniteOrderCatalog {
    let p = field.p as u64;
    let mut entries = Vec::new();
    for n in candidate_orders(field) {
        if n == 1 {
            entries.push(entry(1, field.from_int(2)));
        } else if n % p != 0 {
            if n == 2 {
                entries.push(entry(2, field.from_int(-2)));
                continue;
            }
            // residue traces s with x^2 - s x + 1 having roots of exact order n
            for s in 0..p {
                if (s + 2) % p == 0 || s == 2 % p {
                    continue;
                }
                if residue_root_order(s, p) == n {
                    entries.push(entry(n, lift_trace(field, s)));
                }
            }
        } else {
            let trace = match (field.kind, n) {
                (FieldKind::Laurent, n) if n == p => 2,
                (FieldKind::Laurent, _) => -2,
                (FieldKind::Padic, 2) => -2,
                (FieldKind::Padic, 3) => -1,
                (FieldKind::Padic, 4) => 0,
                (FieldKind::Padic, 6) => 1,
                (FieldKind::Padic, n) => unreachable!("order {n} is not admissible over Q_{p}"),
            };
            entries.push(entry(n, field.from_int(trace)));
        }
    }
    FiniteOrderCatalog { field, entries }
}

impl FiniteOrderCatalog {
    /// Maximum of `v(tr X - 2)` over finite-order `X` with `tr X != 2`.
    pub fn m_k(&self) -> i64 {
        self.entries
            .iter()
            .filter_map(|e| e.trace_minus_two_valuation)
            .max()
            .unwrap_or(0)
            .max(0)
    }

    /// Entries attaining `M_K`.
    pub fn maximizers(&self) -> impl Iterator<Item = &CatalogEntry> {
        let m = self.m_k();
        self.entries
            .iter()
            .filter(move |e| e.trace_minus_two_valuation == Some(m))
    }

    /// Order of `a`, decided from its trace and checked by powering.
    pub fn finite_order(&self, a: &Mat2) -> FiniteOrder {
        let field = a.field();
        let class = classify(a);
        match class.kind {
            ElementKind::Hyperbolic { .. } => return FiniteOrder::Infinite,
            ElementKind::Undetermined => {
                return FiniteOrder::Indeterminate("trace valuation undetermined".into())
            }
            ElementKind::Elliptic => {}
        }
        let tr = a.trace();
        let check_power = |n: u64, bound: i64| {
            let residual = a.pow(n as i64).distance_to_identity();
            match residual {
                ValResult::AtLeast(r) => FiniteOrder::Order {
                    n,
                    verified_at: bound.min(r),
                },
                ValResult::Exact(_) => FiniteOrder::Indeterminate(format!(
                    "trace matches order {n} but the {n}-th power is not the identity at precision"
                )),
            }
        };
        let char_p = field.characteristic() as u64;
        for (sign, base) in [(2i64, 1u64), (-2, 2)] {
            let diff = &tr - &field.from_int(sign);
            let ValResult::AtLeast(bound) = diff.valuation() else {
                continue;
            };
            let target = if sign == 2 {
                Mat2::identity(field)
            } else {
                Mat2::identity(field).neg()
            };
            if a.agrees_with(&target) {
                return FiniteOrder::Order {
                    n: base,
                    verified_at: bound,
                };
            }
            if char_p == 0 {
                // a nontrivial unipotent (or minus one) in characteristic 0
                return FiniteOrder::Infinite;
            }
            let n = if char_p == 2 { 2 } else { base * char_p };
            return check_power(n, bound);
        }
        for e in &self.entries {
            if e.trace_minus_two_valuation.is_none() || e.trace.agrees_with_int(-2) {
                continue;
            }
            if let ValResult::AtLeast(bound) = (&tr - &e.trace).valuation() {
                return check_power(e.order, bound);
            }
        }
        FiniteOrder::Infinite
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FiniteOrder {
    /// Order `n`, verified on all digits below `verified_at`.
    Order {
        n: u64,
        verified_at: i64,
    },
    Infinite,
    Indeterminate(String),
}

impl FiniteOrder {
    pub fn order(&self) -> Option<u64> {
        match self {
            FiniteOrder::Order { n, .. } => Some(*n),
            _ => None,
        }
    }
}

pub fn compute_m_k(field: FieldDesc) -> i64 {
    finite_order_traces(field).m_k()
}

pub fn finite_order(a: &Mat2) -> FiniteOrder {
    finite_order_traces(a.field()).finite_order(a)
}
