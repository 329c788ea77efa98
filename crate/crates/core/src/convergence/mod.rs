//! Finite-horizon experiments on sequences of matrices and their limits.

mod examples;

use serde::{Serialize, Serializer};

use crate::bttree::{common_fixed_end, hyperbolic_axis, End};
use crate::error::{Error, Result};
use crate::localfield::{parse_expression, Expr, FieldDesc, LFElement, ValResult};
use crate::sl2core::{classify, finite_order, ElementClass, ElementKind, FiniteOrder, Mat2};

pub use examples::{
    d_n, run_examples, Check, CheckStatus, DiscrepancyFlag, ExampleReport, ExamplesReport, ProbeRow,
};

pub const DEFAULT_RANGE: (i64, i64) = (1, 12);
/// Largest exponent accepted by [`power_convergence_probe`] is `p^EXPONENT_CAP_LOG`.
pub const EXPONENT_CAP_LOG: u32 = 6;

/// Entries given as closed-form expressions in the index `n`.
#[derive(Debug, Clone)]
pub struct MatrixSequence {
    field: FieldDesc,
    sources: [[String; 2]; 2],
    entries: [[Expr; 2]; 2],
    limit: Mat2,
}

impl MatrixSequence {
    pub fn new(field: FieldDesc, entries: [[&str; 2]; 2], limit: Mat2) -> Result<Self> {
        let parse = |s: &str| parse_expression(s, field);
        Ok(Self {
            field,
            sources: entries.map(|row| row.map(str::to_string)),
            entries: [
                [parse(entries[0][0])?, parse(entries[0][1])?],
                [parse(entries[1][0])?, parse(entries[1][1])?],
            ],
            limit,
        })
    }

    pub fn parse(field: FieldDesc, entries: [[&str; 2]; 2], limit: [[&str; 2]; 2]) -> Result<Self> {
        Self::new(field, entries, Mat2::from_literals(field, limit)?)
    }

    pub fn constant(m: &Mat2) -> Self {
        let lits = m.to_literals();
        let refs = [
            [lits[0][0].as_str(), lits[0][1].as_str()],
            [lits[1][0].as_str(), lits[1][1].as_str()],
        ];
        Self::new(m.field(), refs, m.clone()).expect("formatted literals parse")
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn limit(&self) -> &Mat2 {
        &self.limit
    }

    pub fn term(&self, n: i64) -> Result<Mat2> {
        let e = |i: usize, j: usize| self.entries[i][j].eval(self.field, Some(n));
        Mat2::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }

    /// `min v(term(n) - limit)`.
    pub fn distance_to_limit(&self, n: i64) -> Result<ValResult> {
        let t = self.term(n)?;
        Ok(t.entries()
            .iter()
            .zip(self.limit.entries())
            .map(|(x, y)| (*x - y).valuation())
            .reduce(ValResult::min)
            .unwrap())
    }
}

impl Serialize for MatrixSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MatrixSequence", 2)?;
        st.serialize_field("entries", &self.sources)?;
        st.serialize_field("limit", &self.limit)?;
        st.end()
    }
}

fn same_kind(a: &ElementClass, b: &ElementClass) -> bool {
    a.is_hyperbolic() == b.is_hyperbolic() && a.is_elliptic() == b.is_elliptic()
}

fn range_iter(range: (i64, i64)) -> impl Iterator<Item = i64> {
    range.0..=range.1
}

/// Smallest `n0` such that every index from `n0` on satisfies `ok`.
fn holds_from(items: &[(i64, bool)]) -> Option<i64> {
    let mut from = None;
    for &(n, ok) in items.iter().rev() {
        if !ok {
            break;
        }
        from = Some(n);
    }
    from
}

#[derive(Debug, Clone, Serialize)]
pub struct TailClassification {
    pub limit: ElementClass,
    pub terms: Vec<(i64, ElementClass)>,
    /// First index from which every term has the limit's type.
    pub matches_limit_from: Option<i64>,
    pub tail_matches_limit: bool,
}

pub fn tail_classification(seq: &MatrixSequence, range: (i64, i64)) -> Result<TailClassification> {
    let limit = classify(seq.limit());
    let terms = range_iter(range)
        .map(|n| Ok((n, classify(&seq.term(n)?))))
        .collect::<Result<Vec<_>>>()?;
    let flags: Vec<(i64, bool)> = terms
        .iter()
        .map(|(n, c)| (*n, same_kind(c, &limit)))
        .collect();
    let matches_limit_from = holds_from(&flags);
    Ok(TailClassification {
        limit,
        terms,
        matches_limit_from,
        tail_matches_limit: matches_limit_from.is_some(),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrderStatus {
    Finite { order: u64 },
    Infinite,
    Indeterminate { reason: String },
}

impl From<FiniteOrder> for OrderStatus {
    fn from(f: FiniteOrder) -> Self {
        match f {
            FiniteOrder::Order { n, .. } => OrderStatus::Finite { order: n },
            FiniteOrder::Infinite => OrderStatus::Infinite,
            FiniteOrder::Indeterminate(reason) => OrderStatus::Indeterminate { reason },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub n: i64,
    pub trace: LFElement,
    pub order: OrderStatus,
    pub elliptic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceTail {
    pub rows: Vec<TraceRow>,
    pub constant_from: Option<i64>,
    pub eventually_constant: bool,
    /// Terms that are elliptic of infinite order generate non-discrete cyclic groups.
    pub non_discrete_terms: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn trace_tail(seq: &MatrixSequence, range: (i64, i64)) -> Result<TraceTail> {
    let mut rows = Vec::new();
    for n in range_iter(range) {
        let t = seq.term(n)?;
        rows.push(TraceRow {
            n,
            trace: t.trace(),
            order: finite_order(&t).into(),
            elliptic: classify(&t).is_elliptic(),
        });
    }
    let last = rows.last().map(|r| r.trace.clone());
    let flags: Vec<(i64, bool)> = rows
        .iter()
        .map(|r| (r.n, last.as_ref().is_some_and(|l| r.trace.agrees_with(l))))
        .collect();
    let constant_from = holds_from(&flags).filter(|&n| n < range.1 || range.0 == range.1);
    let non_discrete_terms: Vec<i64> = rows
        .iter()
        .filter(|r| r.elliptic && matches!(r.order, OrderStatus::Infinite))
        .map(|r| r.n)
        .collect();
    let note = match (constant_from.is_some(), non_discrete_terms.is_empty()) {
        (false, false) => Some(
            "traces do not stabilise and the terms have infinite order: the cyclic groups are not discrete"
                .into(),
        ),
        (false, true) => Some(
            "traces do not stabilise although no term is provably non-discrete".into(),
        ),
        _ => None,
    };
    Ok(TraceTail {
        rows,
        eventually_constant: constant_from.is_some(),
        constant_from,
        non_discrete_terms,
        note,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", content = "end", rename_all = "snake_case")]
pub enum TermEnd {
    Common(End),
    None,
    Indeterminate(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CommonEndTail {
    pub rows: Vec<(i64, TermEnd)>,
    pub limit_axis: (End, End),
    /// An end of the limit axis fixed by the first limit.
    pub limit_fixes_axis_end: Option<End>,
    pub tail_has_common_end: bool,
    /// Whether the tail behaviour matches the limit.
    pub agrees_with_limit: bool,
}

pub fn common_end_tail(
    seq_a: &MatrixSequence,
    seq_b: &MatrixSequence,
    range: (i64, i64),
) -> Result<CommonEndTail> {
    if !classify(seq_b.limit()).is_hyperbolic() {
        return Err(Error::Precondition(
            "limit of the second sequence is not hyperbolic".into(),
        ));
    }
    let axis = hyperbolic_axis(seq_b.limit())?;
    let mut limit_fixes_axis_end = None;
    for e in [&axis.repelling, &axis.attracting] {
        if e.image(seq_a.limit())?.same_as(e) {
            limit_fixes_axis_end = Some(e.clone());
            break;
        }
    }
    let mut rows = Vec::new();
    for n in range_iter(range) {
        let r = match common_fixed_end(&seq_a.term(n)?, &seq_b.term(n)?) {
            Ok(Some(e)) => TermEnd::Common(e),
            Ok(None) => TermEnd::None,
            Err(e) => TermEnd::Indeterminate(e.to_string()),
        };
        rows.push((n, r));
    }
    let tail_has_common_end = matches!(rows.last(), Some((_, TermEnd::Common(_))));
    Ok(CommonEndTail {
        agrees_with_limit: tail_has_common_end == limit_fixes_axis_end.is_some(),
        rows,
        limit_axis: (axis.repelling, axis.attracting),
        limit_fixes_axis_end,
        tail_has_common_end,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEntry {
    pub exponent: i64,
    /// `min v((g^k - I)_ij)`.
    pub min_valuation: ValResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
    /// Exact valuations strictly increasing along the exponents: evidence of powers approaching `I`.
    pub increasing: bool,
}

pub fn power_convergence_probe(g: &Mat2, exponents: &[i64]) -> Result<ProbeReport> {
    let cap = (g.field().p as i64).pow(EXPONENT_CAP_LOG);
    let mut entries = Vec::new();
    for &k in exponents {
        if k.unsigned_abs() > cap as u64 {
            return Err(Error::PrecisionExhausted(format!(
                "exponent {k} exceeds the cap p^{EXPONENT_CAP_LOG} = {cap}"
            )));
        }
        entries.push(ProbeEntry {
            exponent: k,
            min_valuation: g.pow(k).distance_to_identity(),
        });
    }
    let increasing = entries.len() >= 2
        && entries
            .windows(2)
            .all(|w| match (w[0].min_valuation, w[1].min_valuation) {
                (ValResult::Exact(a), ValResult::Exact(b)) => a < b,
                _ => false,
            });
    Ok(ProbeReport {
        entries,
        increasing,
    })
}

pub(crate) fn kind_name(c: &ElementClass) -> &'static str {
    match c.kind {
        ElementKind::Hyperbolic { .. } => "hyperbolic",
        ElementKind::Elliptic => "elliptic",
        ElementKind::Undetermined => "undetermined",
    }
}
