//! The valuation form of Jorgensen's inequality
//! `min{v(tr^2 A - 4), v(tr [A,B] - 2)} <= M_K` and its sharp variant.
//!
//! A discrete two-generator group fixing no end satisfies the inequality, so a
//! pair violating it with no common fixed end certifies non-discreteness.

mod certificate;
mod equality;

use serde::Serialize;

use crate::bttree::{fixed_ends, End, FixedEnds};
use crate::localfield::{FieldDesc, FieldKind, LFElement, ValResult};
use crate::sl2core::{commutator, compute_m_k, Mat2};

pub use certificate::{
    elementary_evidence, nonelementary_certificate, ElementaryEvidence, NonElementary,
    VertexSearch, Word,
};
pub use equality::{equality_case_check, search_equality_case, teichmuller_lift, EqualityCheck};

pub const DEFAULT_OVERLAP_RADIUS: u32 = 8;
pub const DEFAULT_VERTEX_RADIUS: u32 = 6;
pub const DEFAULT_WORD_LENGTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JorgensenLhs {
    pub trace_sq_minus_four: ValResult,
    pub commutator_trace_minus_two: ValResult,
    pub min: ValResult,
}

pub fn jorgensen_lhs(a: &Mat2, b: &Mat2) -> JorgensenLhs {
    let f = a.field();
    let t = a.trace();
    let first = (&(&t * &t) - &f.from_int(4)).valuation();
    let second = (&commutator(a, b).trace() - &f.from_int(2)).valuation();
    JorgensenLhs {
        trace_sq_minus_four: first,
        commutator_trace_minus_two: second,
        min: first.min(second),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InequalityHolds,
    NotDiscreteCertificate,
    FixedEndDetected,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SharpRegime {
    Strict,
    Equality,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpReport {
    pub regime: SharpRegime,
    pub equality_check: Option<EqualityCheck>,
}

/// Outcome of the common-end search used by the certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum CommonEnd {
    Found(End),
    /// No common end, every pair of fixed ends separated well inside the precision horizon.
    NoneSeparated,
    /// No common end at working precision, but some pair of ends is too close to call.
    NoneCaveated(String),
    Indeterminate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JorgensenReport {
    pub field: FieldDesc,
    pub lhs: JorgensenLhs,
    pub m_k: i64,
    pub common_end: CommonEnd,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharp: Option<SharpReport>,
    pub caveats: Vec<String>,
}

/// Depth to which two ends agree: `v(c1 - c2)` for finite ends and `-v(c)`
/// between `c` and `Infinity`. `None` when they agree on every digit.
fn agreement_depth(e1: &End, e2: &End) -> Option<i64> {
    match (e1, e2) {
        (End::Infinity, End::Infinity) => None,
        (End::Finite(a), End::Finite(b)) => (a - b).valuation().exact(),
        (End::Finite(c), End::Infinity) | (End::Infinity, End::Finite(c)) => {
            c.valuation().exact().map(|v| -v).or(Some(i64::MIN))
        }
    }
}

pub fn common_end_status(a: &Mat2, b: &Mat2) -> CommonEnd {
    let (fa, fb) = match (fixed_ends(a), fixed_ends(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return CommonEnd::Indeterminate(e.to_string()),
    };
    match (&fa, &fb) {
        (FixedEnds::All, FixedEnds::All) => return CommonEnd::Found(End::Infinity),
        (FixedEnds::All, x) | (x, FixedEnds::All) => {
            return match x.ends().first() {
                Some(e) => CommonEnd::Found((*e).clone()),
                None => CommonEnd::NoneSeparated,
            }
        }
        _ => {}
    }
    let horizon = (a.field().default_precision / 2) as i64;
    let mut close = None;
    for e1 in fa.ends() {
        for e2 in fb.ends() {
            match agreement_depth(e1, e2) {
                None => return CommonEnd::Found(e1.clone()),
                Some(d) if d >= horizon => {
                    close = Some(format!("ends {e1} and {e2} agree to depth {d}"))
                }
                Some(_) => {}
            }
        }
    }
    match close {
        Some(msg) => CommonEnd::NoneCaveated(msg),
        None => CommonEnd::NoneSeparated,
    }
}

pub fn jorgensen_test(a: &Mat2, b: &Mat2) -> JorgensenReport {
    let field = a.field();
    let lhs = jorgensen_lhs(a, b);
    let m_k = compute_m_k(field);
    let common_end = common_end_status(a, b);
    let mut caveats = Vec::new();
    for (name, v) in [
        ("tr^2 A - 4", lhs.trace_sq_minus_four),
        ("tr[A,B] - 2", lhs.commutator_trace_minus_two),
    ] {
        if !v.is_exact() {
            caveats.push(format!("v({name}) is only bounded below: {v}"));
        }
    }
    let verdict = match (lhs.min.exceeds(m_k), &common_end) {
        (Some(false), _) => Verdict::InequalityHolds,
        (_, CommonEnd::Found(_)) => {
            caveats.push("common end equality holds at working precision".into());
            Verdict::FixedEndDetected
        }
        (Some(true), CommonEnd::NoneSeparated) => Verdict::NotDiscreteCertificate,
        (Some(true), CommonEnd::NoneCaveated(msg) | CommonEnd::Indeterminate(msg)) => {
            caveats.push(msg.clone());
            Verdict::Indeterminate
        }
        (None, _) => {
            caveats.push(format!("min {} straddles M_K = {m_k}", lhs.min));
            Verdict::Indeterminate
        }
    };
    JorgensenReport {
        field,
        lhs,
        m_k,
        common_end,
        verdict,
        sharp: None,
        caveats,
    }
}

/// Compares the left side against 0 and, on equality, checks the geometric characterisation.
pub fn sharp_test(a: &Mat2, b: &Mat2, radius: u32) -> JorgensenReport {
    let mut report = jorgensen_test(a, b);
    if report.field.kind == FieldKind::Laurent {
        report
            .caveats
            .push("assumes the group contains no elements of order p".into());
    }
    let regime = match report.lhs.min {
        ValResult::Exact(n) if n < 0 => SharpRegime::Strict,
        ValResult::Exact(0) => SharpRegime::Equality,
        ValResult::AtLeast(n) if n <= 0 => {
            report
                .caveats
                .push(format!("min {} undecided against 0", report.lhs.min));
            SharpRegime::NotApplicable
        }
        _ => SharpRegime::NotApplicable,
    };
    let equality_check =
        (regime == SharpRegime::Equality).then(|| equality_case_check(a, b, radius));
    report.sharp = Some(SharpReport {
        regime,
        equality_check,
    });
    report
}

/// `tr^2 A + tr^2 B + tr^2 AB - tr A tr B tr AB - 2`.
pub fn fricke_commutator_trace(a: &Mat2, b: &Mat2) -> LFElement {
    let (x, y, z) = (a.trace(), b.trace(), a.mul(b).trace());
    let f = a.field();
    &(&(&(&(&x * &x) + &(&y * &y)) + &(&z * &z)) - &(&(&x * &y) * &z)) - &f.from_int(2)
}

pub(crate) fn field_is_odd_padic(f: &FieldDesc) -> bool {
    f.kind == FieldKind::Padic && f.p != 2
}
