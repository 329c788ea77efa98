mod common;

use btj_core::convergence::{d_n, power_convergence_probe, trace_tail, MatrixSequence};
use btj_core::localfield::ValResult;
use btj_core::sl2core::Mat2;
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

type Q = BigRational;

fn q_valuation(x: &Q, p: u32) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let v = |n: &BigInt| {
        let (mut n, mut k) = (n.clone(), 0i64);
        while (&n % p).is_zero() {
            n /= p;
            k += 1;
        }
        k
    };
    Some(v(x.numer()) - v(x.denom()))
}

fn q_mul(a: &[[Q; 2]; 2], b: &[[Q; 2]; 2]) -> [[Q; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn q_pow(m: &[[Q; 2]; 2], mut k: u64) -> [[Q; 2]; 2] {
    let mut acc = [[Q::one(), Q::zero()], [Q::zero(), Q::one()]];
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = q_mul(&acc, &base);
        }
        base = q_mul(&base, &base);
        k >>= 1;
    }
    acc
}

#[test]
fn power_probe_matches_exact_rational_powers() {
    for p in [3u32, 5] {
        let f = padic(p);
        for n in 1..=3i64 {
            let x = Q::one() + Q::from_integer(BigInt::from(p)).pow(n as i32);
            let exact = [[x.clone(), Q::one()], [Q::zero(), x.recip()]];
            let exps: Vec<i64> = (1..=3).map(|m| (p as i64).pow(m)).collect();
            let probe = power_convergence_probe(&d_n(f, n).unwrap(), &exps).unwrap();
            for (m, entry) in (1..=3i64).zip(&probe.entries) {
                let pw = q_pow(&exact, entry.exponent as u64);
                let expected = [
                    &pw[0][0] - Q::one(),
                    pw[0][1].clone(),
                    pw[1][0].clone(),
                    &pw[1][1] - Q::one(),
                ]
                .iter()
                .filter_map(|e| q_valuation(e, p))
                .min()
                .unwrap();
                assert_eq!(
                    entry.min_valuation,
                    ValResult::Exact(expected),
                    "p={p} n={n} m={m}"
                );
                // The off-diagonal entry dominates: its valuation is m, independent of n.
                assert_eq!(expected, m);
            }
            assert!(probe.increasing);
        }
    }
}

#[test]
fn converging_sequence_distances() {
    let f = padic(5);
    let seq = MatrixSequence::parse(
        f,
        [["1 + p^n", "1"], ["p^n", "1"]],
        [["1", "1"], ["0", "1"]],
    )
    .unwrap();
    for n in 1..=10 {
        assert_eq!(seq.distance_to_limit(n).unwrap(), ValResult::Exact(n));
    }
}

#[test]
fn trace_tails() {
    let f = padic(5);
    let order_four = MatrixSequence::constant(&Mat2::from_ints(f, [[0, -1], [1, 0]]).unwrap());
    let t = trace_tail(&order_four, (1, 6)).unwrap();
    assert!(t.eventually_constant);
    assert_eq!(t.constant_from, Some(1));
    assert!(t.non_discrete_terms.is_empty());

    let shrinking =
        MatrixSequence::parse(f, [["0", "-1"], ["1", "p^n"]], [["0", "-1"], ["1", "0"]]).unwrap();
    let t = trace_tail(&shrinking, (1, 6)).unwrap();
    assert!(!t.eventually_constant);
    assert_eq!(t.non_discrete_terms, (1..=6).collect::<Vec<_>>());
    assert!(t.note.is_some());
}
