//! Exit criteria. Each test prints one `PASS`/`FAIL` line and then asserts.

mod common;

use std::time::{Duration, Instant};

use btj_core::bttree::{
    apply, ball, displacement, fixed_ends, hyperbolic_axis, vertex_distance, FixedEnds,
};
use btj_core::convergence::{
    common_end_tail, power_convergence_probe, run_examples, MatrixSequence, TermEnd,
};
use btj_core::jorgensen::{
    equality_case_check, jorgensen_lhs, jorgensen_test, search_equality_case, sharp_test,
    SharpRegime, Verdict, DEFAULT_OVERLAP_RADIUS,
};
use btj_core::localfield::{is_prime, FieldDesc, ValResult};
use btj_core::sl2core::{classify, commutator, compute_m_k, finite_order_traces, Mat2};
use rand::Rng;

use common::*;

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {criterion} ({name}): {status} {detail}");
}

/// `max v(tr - 2)` over the finite orders whose traces are rational: orders 2, 3, 4, 6 with
/// traces -2, -1, 0, 1. Orders prime to `p` outside this list have unit `tr - 2`, and in
/// characteristic `p` every trace other than 2 is a nonzero constant.
fn m_k_oracle(f: FieldDesc) -> i64 {
    if f.characteristic() != 0 {
        return 0;
    }
    let p = f.p as i64;
    [-2i64, -1, 0, 1]
        .iter()
        .map(|t| int_valuation(t - 2, p))
        .max()
        .unwrap()
}

/// An element of the given order and trace: `-I` for order 2, the companion matrix otherwise.
fn realise(f: FieldDesc, order: u64, trace: &btj_core::localfield::LFElement) -> Mat2 {
    if order == 2 {
        Mat2::identity(f).neg()
    } else {
        Mat2::new(f.zero(), -&f.one(), f.one(), trace.clone()).unwrap()
    }
}

/// Order exactly `n`: `C^n = I` and no proper divisor works.
fn has_exact_order(c: &Mat2, n: u64) -> bool {
    c.pow(n as i64).is_identity_like()
        && (1..n)
            .filter(|d| n.is_multiple_of(*d))
            .all(|d| !c.pow(d as i64).is_identity_like())
}

#[test]
fn criterion_1_m_k_values() {
    let mut fields: Vec<FieldDesc> = (2..=97).filter(|&p| is_prime(p)).map(padic).collect();
    fields.extend([2, 3, 5, 7].map(laurent));
    let mut failures = Vec::new();
    for f in &fields {
        let expected = match (f.characteristic(), f.p) {
            (0, 2) => 2,
            (0, 3) => 1,
            _ => 0,
        };
        let cat = finite_order_traces(*f);
        let mk = compute_m_k(*f);
        let realised = cat.maximizers().all(|e| {
            let c = realise(*f, e.order, &e.trace);
            has_exact_order(&c, e.order)
                && (&c.trace() - &f.from_int(2)).valuation() == ValResult::Exact(mk)
        });
        if mk != expected
            || m_k_oracle(*f) != expected
            || cat.maximizers().count() == 0
            || !realised
        {
            failures.push(format!("{f}: M_K = {mk}"));
        }
    }
    let ok = failures.is_empty();
    report(
        1,
        "M_K values",
        ok,
        &format!("{} fields; {failures:?}", fields.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_2_translation_length_brute_force() {
    let f = padic(5);
    let mut rng = rng(2);
    let mut bad = Vec::new();
    let samples = 100;
    for i in 0..samples {
        let k = rng.gen_range(1..=3);
        let g = random_hyperbolic(&mut rng, f, k);
        let expected = match g.trace().valuation() {
            ValResult::Exact(v) => (-2 * v) as u64,
            v => panic!("trace valuation {v}"),
        };
        let axis = hyperbolic_axis(&g).unwrap();
        let brute = ball(&axis.base_point, 4)
            .iter()
            .map(|v| displacement(&g, v).unwrap())
            .min()
            .unwrap();
        if brute != expected || expected > 6 {
            bad.push((i, brute, expected));
        }
    }
    let ok = bad.is_empty();
    report(
        2,
        "translation length vs brute force",
        ok,
        &format!("{samples} samples; mismatches {bad:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_3_commuting_elliptics() {
    let f = padic(7).with_precision(64).unwrap();
    let s = f.from_int(-3).sqrt().unwrap();
    let a = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
    let b = Mat2::new(f.from_int(2), -&s, s.clone(), f.from_int(2)).unwrap();
    let commute = a.mul(&b).agrees_with(&b.mul(&a));
    let tr2 = commutator(&a, &b).trace().agrees_with_int(2);
    let squares = (
        f.from_int(-4).is_square().unwrap(),
        f.from_int(12).is_square().unwrap(),
    );
    let ends = (fixed_ends(&a).unwrap(), fixed_ends(&b).unwrap());
    let ok =
        commute && tr2 && squares == (false, false) && ends == (FixedEnds::None, FixedEnds::None);
    report(
        3,
        "commuting elliptic pair over Q_7",
        ok,
        &format!("AB=BA {commute}, tr[A,B]=2 {tr2}, squares {squares:?}, ends {ends:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_4_non_discreteness_certificates() {
    let mut bad = Vec::new();
    for p in [5, 7] {
        let f = padic(p);
        let b = Mat2::from_literals(f, [["p", "0"], ["1", "1/p"]]).unwrap();
        let c = Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap();
        for n in 1..=5 {
            let a = upper(f, f.uniformizer_pow(n));
            let r = jorgensen_test(&a, &b);
            if r.verdict != Verdict::NotDiscreteCertificate
                || r.lhs.commutator_trace_minus_two != ValResult::Exact(2 * n)
            {
                bad.push(format!(
                    "p={p} n={n} B: {:?} {}",
                    r.verdict, r.lhs.commutator_trace_minus_two
                ));
            }
            let r = jorgensen_test(&a, &c);
            if r.verdict != Verdict::FixedEndDetected {
                bad.push(format!("p={p} n={n} C: {:?}", r.verdict));
            }
        }
    }
    let ok = bad.is_empty();
    report(4, "non-discreteness certificates", ok, &format!("{bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_5_sharp_regime() {
    let f = padic(5);
    let s = Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap();
    let b = Mat2::from_literals(f, [["0", "-1/p"], ["p", "1"]]).unwrap();
    let r = sharp_test(&s, &b, DEFAULT_OVERLAP_RADIUS);
    let strict = r.lhs.min == ValResult::Exact(-2)
        && r.sharp.as_ref().map(|s| s.regime) == Some(SharpRegime::Strict);

    let start = Instant::now();
    let found = search_equality_case(f, 3);
    let elapsed = start.elapsed();
    let equality = match &found {
        Some((a, b)) => {
            jorgensen_lhs(a, b).min == ValResult::Exact(0)
                && equality_case_check(a, b, DEFAULT_OVERLAP_RADIUS).is_verified()
        }
        None => false,
    };
    let ok = strict && equality && elapsed < Duration::from_secs(10);
    report(
        5,
        "sharp regime",
        ok,
        &format!(
            "strict min {}, equality pair verified {equality} in {elapsed:?}",
            r.lhs.min
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6_tree_properties() {
    let mut rng = rng(6);
    let mut failures = Vec::new();
    let mut samples = 0;
    for p in [2, 3, 5] {
        let f = padic(p);
        for _ in 0..170 {
            let g = random_sl2(&mut rng, f, 4);
            let (u, v, w) = (
                random_vertex(&mut rng, f, 5),
                random_vertex(&mut rng, f, 5),
                random_vertex(&mut rng, f, 5),
            );
            let duv = vertex_distance(&u, &v);
            if duv != vertex_distance(&v, &u)
                || (duv == 0) != (u == v)
                || vertex_distance(&u, &w) > duv + vertex_distance(&v, &w)
            {
                failures.push(format!("metric at {u} {v} {w}"));
            }
            let (gu, gv) = (apply(&g, &u).unwrap(), apply(&g, &v).unwrap());
            if vertex_distance(&gu, &gv) != duv {
                failures.push(format!("isometry {g} at {u} {v}"));
            }
            if let Some(l) = classify(&g).translation_length() {
                let d = displacement(&g, &u).unwrap();
                if d < l || !(d - l).is_multiple_of(2) {
                    failures.push(format!("parity {g} at {u}: d={d} l={l}"));
                }
            }
            samples += 1;
        }
        for _ in 0..20 {
            let v = random_vertex(&mut rng, f, 6);
            let nb = v.neighbors();
            if nb.len() != p as usize + 1 || nb.iter().any(|w| vertex_distance(&v, w) != 1) {
                failures.push(format!("neighbours of {v}"));
            }
        }
    }
    let ok = failures.is_empty() && samples >= 500;
    report(
        6,
        "tree properties",
        ok,
        &format!("{samples} samples; {failures:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_7_valuation_laws() {
    let mut rng = rng(7);
    let fields = [
        padic(2),
        padic(3),
        padic(5),
        padic(7),
        laurent(2),
        laurent(3),
        laurent(5),
    ];
    let mut failures = Vec::new();
    for f in fields {
        for _ in 0..1000 {
            let (x, vx) = random_element(&mut rng, f, -5, 5);
            let (y, vy) = random_element(&mut rng, f, -5, 5);
            if (&x * &y).valuation() != ValResult::Exact(vx + vy) {
                failures.push(format!("{f}: v(xy) for {x}, {y}"));
            }
            let s = (&x + &y).valuation();
            let holds = if vx != vy {
                s == ValResult::Exact(vx.min(vy))
            } else {
                s.lower_bound() >= vx
            };
            if !holds {
                failures.push(format!("{f}: ultrametric for {x}, {y}"));
            }
        }
        for _ in 0..200 {
            let (y, _) = random_element(&mut rng, f, -3, 3);
            let x = &y * &y;
            match x.sqrt() {
                Ok(r) if (&r * &r).agrees_with(&x) => {}
                other => failures.push(format!("{f}: sqrt({x}) = {other:?}")),
            }
        }
    }
    let ok = failures.is_empty();
    report(
        7,
        "valuation laws",
        ok,
        &format!("{} failures {:?}", failures.len(), failures.first()),
    );
    assert!(ok);
}

#[test]
fn criterion_8_convergence_suite() {
    let f = padic(5);
    let seq_a = MatrixSequence::parse(
        f,
        [["1 + p^n", "1"], ["p^n", "1"]],
        [["1", "1"], ["0", "1"]],
    )
    .unwrap();
    let seq_b =
        MatrixSequence::constant(&Mat2::from_literals(f, [["p", "0"], ["0", "1/p"]]).unwrap());
    let tail = common_end_tail(&seq_a, &seq_b, (1, 12)).unwrap();
    let no_common =
        tail.rows.len() == 12 && tail.rows.iter().all(|(_, e)| matches!(e, TermEnd::None));
    let limit_fixes = tail.limit_fixes_axis_end.is_some();

    let mut probe = Vec::new();
    let mut probe_ok = true;
    for n in 1..=4i64 {
        let one_plus = &f.one() + &f.uniformizer_pow(n);
        let d = Mat2::new(one_plus.clone(), f.one(), f.zero(), one_plus.inv().unwrap()).unwrap();
        let exps: Vec<i64> = (1..=4).map(|m| 5i64.pow(m)).collect();
        let r = power_convergence_probe(&d, &exps).unwrap();
        for (m, e) in (1..=4i64).zip(&r.entries) {
            probe_ok &= e.min_valuation.lower_bound() >= n + m;
            probe.push(format!("n={n},m={m}:{}", e.min_valuation));
        }
    }

    let mut orders = Vec::new();
    for p in [2u32, 3, 5] {
        let lf = laurent(p);
        let x1 = upper(lf, lf.one());
        let x2 = upper(lf, lf.uniformizer_pow(1));
        let mut elems = vec![Mat2::identity(lf)];
        let mut frontier = elems.clone();
        while !frontier.is_empty() && elems.len() <= 1000 {
            let mut next = Vec::new();
            for x in &frontier {
                for g in [&x1, &x2] {
                    let y = x.mul(g);
                    if !elems.iter().any(|e| e.agrees_with(&y)) {
                        elems.push(y.clone());
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        orders.push((p, elems.len()));
    }
    let orders_ok = orders.iter().all(|&(p, n)| n == (p * p) as usize);

    let ok = no_common && limit_fixes && probe_ok && orders_ok;
    report(
        8,
        "convergence suite",
        ok,
        &format!(
            "no common end {no_common}, limit fixes axis end {limit_fixes}, \
             probe >= n+m {probe_ok} [{}], group orders {orders:?}",
            probe.join(" ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_9_discrepancy_flag() {
    let r = run_examples(padic(5)).unwrap();
    let flag = r
        .example("converging-groups")
        .and_then(|e| e.discrepancy.as_ref());
    let ok = match flag {
        Some(d) => {
            d.discreteness_discrepancy
                && !d.probe.is_empty()
                && d.note.contains("inconsistent with <D_n> being discrete")
        }
        None => false,
    };
    report(
        9,
        "discreteness discrepancy flag",
        ok,
        &flag.map_or("missing".to_string(), |d| {
            format!("{} probe rows, note: {}", d.probe.len(), d.note)
        }),
    );
    assert!(ok);
}
