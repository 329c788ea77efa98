use serde::Serialize;

use super::{field_is_odd_padic, jorgensen_lhs};
use crate::bttree::{fixed_overlap_on_axis, Overlap};
use crate::localfield::{FieldDesc, LFElement, ValResult};
use crate::sl2core::{
    classify, finite_order_traces, ElementKind, FiniteOrder, FiniteOrderCatalog, Mat2,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EqualityCheck {
    Verified {
        order: u64,
        length: u64,
    },
    Refuted {
        reason: String,
    },
    Indeterminate {
        reason: String,
        suggested_radius: Option<u32>,
    },
}

impl EqualityCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, EqualityCheck::Verified { .. })
    }
}

fn refuted(reason: impl Into<String>) -> EqualityCheck {
    EqualityCheck::Refuted {
        reason: reason.into(),
    }
}

fn check_with(catalog: &FiniteOrderCatalog, a: &Mat2, b: &Mat2, radius: u32) -> EqualityCheck {
    if a.is_central_like() {
        return refuted("A is central");
    }
    let order = match catalog.finite_order(a) {
        FiniteOrder::Order { n, .. } => n,
        FiniteOrder::Infinite => return refuted("A has infinite order"),
        FiniteOrder::Indeterminate(reason) => {
            return EqualityCheck::Indeterminate {
                reason,
                suggested_radius: None,
            }
        }
    };
    if !classify(a).is_elliptic() {
        return refuted("A is not elliptic");
    }
    let length = match classify(b).kind {
        ElementKind::Hyperbolic { length } => length,
        _ => return refuted("B is not hyperbolic"),
    };
    match fixed_overlap_on_axis(a, b, radius) {
        Ok(Overlap::SegmentLength(n)) if n == length => EqualityCheck::Verified { order, length },
        Ok(Overlap::SegmentLength(n)) => refuted(format!(
            "Fix(A) meets the axis of B in length {n}, translation length is {length}"
        )),
        Ok(Overlap::Empty) => refuted("Fix(A) misses the axis of B"),
        Ok(Overlap::ExceedsRadius) => EqualityCheck::Indeterminate {
            reason: format!("overlap reaches the search radius {radius}"),
            suggested_radius: Some(radius * 2),
        },
        Err(e) => EqualityCheck::Indeterminate {
            reason: e.to_string(),
            suggested_radius: None,
        },
    }
}

/// A of finite order and elliptic, B hyperbolic, `Fix(A)` meeting the axis of
/// B in a segment of length `l(B)`.
pub fn equality_case_check(a: &Mat2, b: &Mat2, radius: u32) -> EqualityCheck {
    check_with(&finite_order_traces(a.field()), a, b, radius)
}

/// The root of unity lifting the residue `r`, by iterating `x -> x^p`.
pub fn teichmuller_lift(field: FieldDesc, r: u32) -> LFElement {
    let mut x = field.from_int(r as i64);
    for _ in 0..=field.default_precision {
        x = x.pow(field.p as i64).expect("unit");
    }
    x
}

fn residue_order(r: u64, p: u64) -> u64 {
    let mut x = r % p;
    let mut k = 1;
    while x != 1 {
        x = x * r % p;
        k += 1;
    }
    k
}

/// Grid of coefficients `k p^e` with `1 <= |k| <= bound`, `e` in `{-1, 0, 1}`, then zero.
fn grid(field: FieldDesc, bound: u32) -> Vec<LFElement> {
    let mut out = Vec::new();
    for e in [-1, 0, 1] {
        for k in 1..=bound as i64 {
            for s in [k, -k] {
                out.push(&field.from_int(s) * &field.uniformizer_pow(e));
            }
        }
    }
    if !out.is_empty() {
        out.push(field.zero());
    }
    out
}

/// Searches conjugates of `diag(zeta, 1/zeta)` against hyperbolic `B` of
/// length 2 on a small grid, returning the first pair realising equality.
pub fn search_equality_case(field: FieldDesc, bound: u32) -> Option<(Mat2, Mat2)> {
    if !field_is_odd_padic(&field) || bound == 0 {
        return None;
    }
    let catalog = finite_order_traces(field);
    let p = field.p as u64;
    let residues: Vec<u32> = (2..p)
        .filter(|&r| residue_order(r, p) > 2)
        .map(|r| r as u32)
        .collect();
    let mut conjugators = vec![Mat2::identity(field)];
    for k in 1..=bound as i64 {
        conjugators.push(Mat2::from_ints(field, [[1, k], [0, 1]]).unwrap());
        conjugators.push(Mat2::from_ints(field, [[1, 0], [k, 1]]).unwrap());
    }
    let coeffs = grid(field, bound);
    let one = field.one();
    for &r in &residues {
        let zeta = teichmuller_lift(field, r);
        let base = Mat2::diagonal(&zeta).ok()?;
        for m in &conjugators {
            let a = base.conjugate_by(m);
            for x in coeffs.iter().filter(|x| !x.is_exact_zero()) {
                for y in &coeffs {
                    for z in &coeffs {
                        let Ok(w) = (&one + &(y * z)).div(x) else {
                            continue;
                        };
                        let Ok(b) = Mat2::new(x.clone(), y.clone(), z.clone(), w) else {
                            continue;
                        };
                        if b.trace().valuation() != ValResult::Exact(-1) {
                            continue;
                        }
                        if jorgensen_lhs(&a, &b).min != ValResult::Exact(0) {
                            continue;
                        }
                        if check_with(&catalog, &a, &b, super::DEFAULT_OVERLAP_RADIUS).is_verified()
                        {
                            return Some((a, b));
                        }
                    }
                }
            }
        }
    }
    None
}
