//! The worked examples: each claim is recomputed and reported independently.

use serde::Serialize;

use super::{
    common_end_tail, kind_name, power_convergence_probe, tail_classification, MatrixSequence,
};
use crate::bttree::{fixed_ends, fixes_vertex, FixedEnds, Vertex};
use crate::error::Result;
use crate::jorgensen::{
    elementary_evidence, jorgensen_test, nonelementary_certificate, sharp_test, NonElementary,
    SharpRegime, Verdict, VertexSearch, DEFAULT_OVERLAP_RADIUS, DEFAULT_VERTEX_RADIUS,
    DEFAULT_WORD_LENGTH,
};
use crate::localfield::{FieldDesc, FieldKind, ValResult};
use crate::sl2core::{classify, commutator, finite_order, FiniteOrder, Mat2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn from_bool(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((ok, detail)) => Self::from_bool(name, ok, detail),
            Err(e) => Self {
                name: name.into(),
                status: CheckStatus::Indeterminate,
                detail: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub n: i64,
    pub m: u32,
    pub exponent: i64,
    pub min_valuation: ValResult,
    /// The bound `n + m` expected for `D_n^(p^m) - I`.
    pub expected_at_least: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyFlag {
    pub discreteness_discrepancy: bool,
    pub note: String,
    pub probe: Vec<ProbeRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub id: &'static str,
    pub field: FieldDesc,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<DiscrepancyFlag>,
}

impl ExampleReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExamplesReport {
    pub examples: Vec<ExampleReport>,
}

impl ExamplesReport {
    pub fn example(&self, id: &str) -> Option<&ExampleReport> {
        self.examples.iter().find(|e| e.id == id)
    }

    pub fn any_indeterminate(&self) -> bool {
        self.examples
            .iter()
            .flat_map(|e| &e.checks)
            .any(|c| c.status == CheckStatus::Indeterminate)
    }
}

/// Closure of a finite generating set, or `None` past `cap` elements.
pub fn group_closure(gens: &[Mat2], cap: usize) -> Option<Vec<Mat2>> {
    let f = gens[0].field();
    let mut elems = vec![Mat2::identity(f)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.mul(g);
                if !elems.iter().any(|e| e.agrees_with(&y)) {
                    elems.push(y.clone());
                    next.push(y);
                    if elems.len() > cap {
                        return None;
                    }
                }
            }
        }
        frontier = next;
    }
    Some(elems)
}

fn unitriangular(p: u32, precision: u32) -> Result<ExampleReport> {
    let f = FieldDesc::new(FieldKind::Laurent, p, precision)?;
    let x1 = Mat2::from_literals(f, [["1", "1"], ["0", "1"]])?;
    let x2 = Mat2::from_literals(f, [["1", "t"], ["0", "1"]])?;
    let base = Vertex::base(f);
    let mut checks = Vec::new();
    checks.push(Check::from_result("generators have order p", {
        let orders = [finite_order(&x1).order(), finite_order(&x2).order()];
        Ok((orders == [Some(p as u64); 2], format!("{orders:?}")))
    }));
    checks.push(Check::from_result(
        "generators fix the base vertex",
        (|| {
            Ok((
                fixes_vertex(&x1, &base)? && fixes_vertex(&x2, &base)?,
                String::new(),
            ))
        })(),
    ));
    let cap = 10 * (p as usize).pow(2);
    let closure = group_closure(&[x1, x2], cap);
    let order = closure.as_ref().map(Vec::len);
    checks.push(Check::from_bool(
        "two generators give a group of order p^2",
        order == Some((p as usize).pow(2)),
        match order {
            Some(n) => format!("order {n}"),
            None => format!("more than {cap} elements"),
        },
    ));
    checks.push(Check::from_result(
        "every element fixes the base vertex",
        (|| {
            let mut ok = closure.is_some();
            for g in closure.iter().flatten() {
                ok &= fixes_vertex(g, &base)?;
            }
            Ok((ok, String::new()))
        })(),
    ));
    Ok(ExampleReport {
        id: "unitriangular",
        field: f,
        checks,
        discrepancy: None,
    })
}

fn padic_mat(f: FieldDesc, m: [[&str; 2]; 2]) -> Result<Mat2> {
    Mat2::from_literals(f, m)
}

/// `D_n = [[1 + p^n, 1], [0, 1/(1 + p^n)]]`.
pub fn d_n(f: FieldDesc, n: i64) -> Result<Mat2> {
    let x = &f.one() + &f.uniformizer_pow(n);
    Mat2::new(x.clone(), f.one(), f.zero(), x.inv()?)
}

fn converging_groups(f: FieldDesc) -> Result<ExampleReport> {
    let b = padic_mat(f, [["p", "0"], ["1", "1/p"]])?;
    let c = padic_mat(f, [["p", "0"], ["0", "1/p"]])?;
    let mut checks = Vec::new();
    let ns = 1..=5i64;
    let mut cert = Vec::new();
    let mut ends = Vec::new();
    for n in ns.clone() {
        let a = Mat2::new(f.one(), f.uniformizer_pow(n), f.zero(), f.one())?;
        let r = jorgensen_test(&a, &b);
        cert.push(
            r.verdict == Verdict::NotDiscreteCertificate
                && r.lhs.commutator_trace_minus_two == ValResult::Exact(2 * n),
        );
        ends.push(jorgensen_test(&a, &c).verdict == Verdict::FixedEndDetected);
    }
    checks.push(Check::from_bool(
        "<A_n, B> certified non-discrete with v(tr[A_n,B] - 2) = 2n",
        cert.iter().all(|&x| x),
        format!("n = 1..5: {cert:?}"),
    ));
    checks.push(Check::from_bool(
        "<A_n, C> fixes an end",
        ends.iter().all(|&x| x),
        format!("n = 1..5: {ends:?}"),
    ));
    let a1 = Mat2::new(f.one(), f.uniformizer_pow(1), f.zero(), f.one())?;
    let cert = nonelementary_certificate(&[a1, b.clone()], DEFAULT_WORD_LENGTH);
    checks.push(Check::from_bool(
        "<A_1, B> non-elementary",
        matches!(cert, NonElementary::Certified { .. }),
        match &cert {
            NonElementary::Certified { h1, h2, .. } => format!("hyperbolic words {h1}, {h2}"),
            NonElementary::Inconclusive => "no certificate".into(),
        },
    ));
    let unip = MatrixSequence::parse(f, [["1", "p^n"], ["0", "1"]], [["1", "0"], ["0", "1"]])?;
    checks.push(Check::from_result(
        "A_n converges to I",
        (|| {
            let d: Vec<ValResult> = (1..=6)
                .map(|n| unip.distance_to_limit(n))
                .collect::<Result<_>>()?;
            let ok = d.iter().zip(1..).all(|(v, n)| *v == ValResult::Exact(n));
            Ok((ok, format!("{d:?}")))
        })(),
    ));

    let p = f.p as i64;
    let mut probe = Vec::new();
    let mut approaches = true;
    for n in 1..=4i64 {
        let exps: Vec<i64> = (1..=4).map(|m| p.pow(m)).collect();
        let r = power_convergence_probe(&d_n(f, n)?, &exps)?;
        approaches &= r.increasing;
        for (m, e) in (1..=4u32).zip(r.entries) {
            probe.push(ProbeRow {
                n,
                m,
                exponent: e.exponent,
                min_valuation: e.min_valuation,
                expected_at_least: n + m as i64,
            });
        }
    }
    checks.push(Check::from_bool(
        "powers D_n^(p^m) approach I",
        approaches,
        "min entry valuation of D_n^(p^m) - I strictly increases in m",
    ));
    let meets_bound = probe
        .iter()
        .all(|r| r.min_valuation.lower_bound() >= r.expected_at_least);
    let observed: Vec<String> = probe
        .iter()
        .map(|r| format!("n={} m={}: {}", r.n, r.m, r.min_valuation))
        .collect();
    checks.push(Check::from_bool(
        "D_n^(p^m) - I has valuation at least n + m",
        meets_bound,
        observed.join(", "),
    ));
    let discrepancy = DiscrepancyFlag {
        discreteness_discrepancy: approaches,
        note: "distinct nontrivial powers of D_n approach the identity, which is inconsistent \
               with <D_n> being discrete"
            .into(),
        probe,
    };
    Ok(ExampleReport {
        id: "converging-groups",
        field: f,
        checks,
        discrepancy: Some(discrepancy),
    })
}

fn commuting_elliptics(precision: u32) -> Result<ExampleReport> {
    let f = FieldDesc::new(FieldKind::Padic, 7, precision)?;
    let s = f.from_int(-3).sqrt()?;
    let a = Mat2::from_ints(f, [[0, -1], [1, 0]])?;
    let b = Mat2::new(f.from_int(2), -&s, s.clone(), f.from_int(2))?;
    let mut checks = Vec::new();
    checks.push(Check::from_bool(
        "AB = BA",
        a.mul(&b).agrees_with(&b.mul(&a)),
        "entrywise agreement on all valid digits",
    ));
    let tr = commutator(&a, &b).trace();
    checks.push(Check::from_bool(
        "tr[A,B] = 2",
        tr.agrees_with_int(2),
        tr.to_string(),
    ));
    checks.push(Check::from_result(
        "-4 and 12 are not squares",
        (|| {
            let (x, y) = (f.from_int(-4).is_square()?, f.from_int(12).is_square()?);
            Ok((!x && !y, format!("-4: {x}, 12: {y}")))
        })(),
    ));
    checks.push(Check::from_result(
        "A and B fix no ends",
        (|| {
            let (x, y) = (fixed_ends(&a)?, fixed_ends(&b)?);
            Ok((
                x == FixedEnds::None && y == FixedEnds::None,
                format!("{x:?}, {y:?}"),
            ))
        })(),
    ));
    let ev = elementary_evidence(&a, &b, DEFAULT_VERTEX_RADIUS);
    let found = match &ev.common_fixed_vertex {
        VertexSearch::Found { vertex } => format!("common fixed vertex {vertex}"),
        other => format!("{other:?}"),
    };
    checks.push(Check::from_bool(
        "no stabilised end pair",
        ev.stabilized_end_pair.is_none(),
        found,
    ));
    Ok(ExampleReport {
        id: "commuting-elliptics",
        field: f,
        checks,
        discrepancy: None,
    })
}

fn amalgam_generators(f: FieldDesc) -> Result<ExampleReport> {
    let s = Mat2::from_ints(f, [[0, -1], [1, 0]])?;
    let t = Mat2::from_ints(f, [[0, -1], [1, 1]])?;
    let b = padic_mat(f, [["0", "-1/p"], ["p", "1"]])?;
    let mut checks = Vec::new();
    let orders = |x: &Mat2, y: &Mat2| [finite_order(x).order(), finite_order(y).order()];
    let o1 = orders(&s, &t);
    checks.push(Check::from_bool(
        "integral generators have orders 4 and 6",
        o1 == [Some(4), Some(6)],
        format!("{o1:?}"),
    ));
    checks.push(Check::from_result(
        "integral group fixes the base vertex",
        (|| {
            let base = Vertex::base(f);
            Ok((
                fixes_vertex(&s, &base)? && fixes_vertex(&t, &base)?,
                String::new(),
            ))
        })(),
    ));
    let st = s.mul(&t);
    checks.push(Check::from_bool(
        "integral group contains an infinite-order elliptic element",
        classify(&st).is_elliptic() && finite_order(&st) == FiniteOrder::Infinite,
        format!("ST = {st}"),
    ));
    let o2 = orders(&s, &b);
    checks.push(Check::from_bool(
        "second pair has orders 4 and 6",
        o2 == [Some(4), Some(6)],
        format!("{o2:?}"),
    ));
    let cert = nonelementary_certificate(&[s.clone(), b.clone()], DEFAULT_WORD_LENGTH);
    checks.push(Check::from_bool(
        "second pair non-elementary",
        matches!(cert, NonElementary::Certified { .. }),
        match &cert {
            NonElementary::Certified { h1, h2, .. } => format!("hyperbolic words {h1}, {h2}"),
            NonElementary::Inconclusive => "no certificate".into(),
        },
    ));
    let r = sharp_test(&s, &b, DEFAULT_OVERLAP_RADIUS);
    checks.push(Check::from_bool(
        "inequality holds for the second pair",
        r.verdict == Verdict::InequalityHolds,
        format!("min = {}", r.lhs.min),
    ));
    let strict = f.kind == FieldKind::Padic
        && r.sharp.as_ref().map(|s| s.regime) == Some(SharpRegime::Strict);
    checks.push(Check::from_bool(
        "strict inequality for the second pair",
        strict,
        format!("min = {}", r.lhs.min),
    ));
    Ok(ExampleReport {
        id: "amalgam",
        field: f,
        checks,
        discrepancy: None,
    })
}

fn approximate_end(f: FieldDesc) -> Result<ExampleReport> {
    let seq_a = MatrixSequence::parse(
        f,
        [["1 + p^n", "1"], ["p^n", "1"]],
        [["1", "1"], ["0", "1"]],
    )?;
    let seq_b = MatrixSequence::constant(&padic_mat(f, [["p", "0"], ["0", "1/p"]])?);
    let mut checks = Vec::new();
    checks.push(Check::from_result(
        "A_n converges to A",
        (|| {
            let d: Vec<ValResult> = (1..=12)
                .map(|n| seq_a.distance_to_limit(n))
                .collect::<Result<_>>()?;
            let ok = d.iter().zip(1..).all(|(v, n)| *v == ValResult::Exact(n));
            Ok((ok, format!("{d:?}")))
        })(),
    ));
    checks.push(Check::from_result(
        "A_n elliptic like A",
        (|| {
            let t = tail_classification(&seq_a, (1, 12))?;
            Ok((
                t.matches_limit_from == Some(1),
                kind_name(&t.limit).to_string(),
            ))
        })(),
    ));
    let tail = common_end_tail(&seq_a, &seq_b, (1, 12));
    checks.push(Check::from_result(
        "no common end for n <= 12",
        tail.as_ref().map_err(Clone::clone).map(|t| {
            let ok = t
                .rows
                .iter()
                .all(|(_, e)| matches!(e, super::TermEnd::None));
            (ok, format!("{} terms", t.rows.len()))
        }),
    ));
    checks.push(Check::from_result(
        "A fixes an end of Ax(B)",
        tail.map(|t| {
            let e = t.limit_fixes_axis_end;
            (e.is_some(), format!("{e:?}"))
        }),
    ));
    Ok(ExampleReport {
        id: "approximate-end",
        field: f,
        checks,
        discrepancy: None,
    })
}

/// Runs every example. `field` selects `p` and the precision; the commuting
/// example always lives over `Q_7` and the unitriangular one over `F_p((t))`.
pub fn run_examples(field: FieldDesc) -> Result<ExamplesReport> {
    let p = field.p;
    let padic = FieldDesc::new(FieldKind::Padic, p, field.default_precision)?;
    let mut examples = vec![unitriangular(p, field.default_precision)?];
    if p != 2 {
        examples.push(converging_groups(padic)?);
    }
    examples.push(commuting_elliptics(field.default_precision)?);
    examples.push(amalgam_generators(padic)?);
    examples.push(approximate_end(padic)?);
    Ok(ExamplesReport { examples })
}
