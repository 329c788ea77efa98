mod common;

use btj_core::bttree::{fixed_ends, FixedEnds};
use btj_core::jorgensen::{
    fricke_commutator_trace, jorgensen_lhs, jorgensen_test, sharp_test, SharpRegime, Verdict,
    DEFAULT_OVERLAP_RADIUS,
};
use btj_core::localfield::ValResult;
use btj_core::sl2core::{classify, commutator, Mat2};
use common::*;
use proptest::prelude::*;
use rand::Rng;

/// Products of at most `len` letters from `{A, A^-1, B, B^-1}`, skipping cancellations.
fn words(a: &Mat2, b: &Mat2, len: usize) -> Vec<Mat2> {
    let letters = [a.clone(), a.inv(), b.clone(), b.inv()];
    let mut out = Vec::new();
    let mut layer: Vec<(Mat2, usize)> = (0..4).map(|i| (letters[i].clone(), i)).collect();
    for _ in 0..len {
        out.extend(layer.iter().map(|(m, _)| m.clone()));
        let mut next = Vec::new();
        for (m, last) in &layer {
            for (i, l) in letters.iter().enumerate() {
                if i != (last ^ 1) {
                    next.push((m.mul(l), i));
                }
            }
        }
        layer = next;
    }
    out
}

fn small_int_matrix(rng: &mut rand_chacha::ChaCha8Rng, f: btj_core::localfield::FieldDesc) -> Mat2 {
    // [[a, b], [c, d]] with ad - bc = 1 from a random b, c, d and a = (1 + bc) / d.
    loop {
        let (b, c, d) = (
            rng.gen_range(-6..=6i64),
            rng.gen_range(-6..=6i64),
            nonzero(rng, 6),
        );
        if (1 + b * c) % d == 0 {
            return Mat2::from_ints(f, [[(1 + b * c) / d, b], [c, d]]).unwrap();
        }
    }
}

#[test]
fn certificates_survive_a_word_search() {
    let f = padic(5);
    let mut r = rng(11);
    let (mut certified, mut witnessed) = (0, 0);
    for _ in 0..200 {
        let a = small_int_matrix(&mut r, f);
        let b = Mat2::diagonal(&f.uniformizer_pow(-1))
            .unwrap()
            .mul(&small_int_matrix(&mut r, f));
        let b = b.conjugate_by(&Mat2::diagonal(&f.uniformizer_pow(r.gen_range(0..=2))).unwrap());
        let report = jorgensen_test(&a, &b);
        if report.verdict != Verdict::NotDiscreteCertificate {
            continue;
        }
        certified += 1;
        // A certificate requires a large inequality minimum and disjoint fixed-end sets.
        assert!(report.lhs.min.lower_bound() > report.m_k, "{a} {b}");
        let (fa, fb) = (fixed_ends(&a).unwrap(), fixed_ends(&b).unwrap());
        assert!(!matches!(fa, FixedEnds::All) && !matches!(fb, FixedEnds::All));
        for e in fa.ends() {
            assert!(
                fb.ends().iter().all(|x| !x.same_as(e)),
                "shared end {e} for {a}, {b}"
            );
        }
        let close = words(&a, &b, 8)
            .iter()
            .any(|w| !w.is_central_like() && w.distance_to_identity().lower_bound() >= 3);
        if close {
            witnessed += 1;
        } else {
            println!("no word of length <= 8 within valuation 3 of I for a certified pair");
        }
    }
    println!("{certified} certificates, {witnessed} with a word of length <= 8 near I");
}

/// Equal exact valuations, or both only bounded below (a zero-like value whose bound depends
/// on the precision lost along the way).
fn same_value(x: &ValResult, y: &ValResult) -> bool {
    match (x, y) {
        (ValResult::Exact(a), ValResult::Exact(b)) => a == b,
        (ValResult::AtLeast(_), ValResult::AtLeast(_)) => true,
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn lhs_ignores_sign_and_conjugation(p in prop_oneof![Just(3u32), Just(5), Just(7)], seed in any::<u64>()) {
        let f = padic(p);
        let mut r = rng(seed);
        let (a, b, m) = (random_sl2(&mut r, f, 3), random_sl2(&mut r, f, 3), random_sl2(&mut r, f, 3));
        let base = jorgensen_lhs(&a, &b);
        for other in [jorgensen_lhs(&a.neg(), &b), jorgensen_lhs(&a.conjugate_by(&m), &b.conjugate_by(&m))] {
            prop_assert!(same_value(&other.trace_sq_minus_four, &base.trace_sq_minus_four));
            prop_assert!(same_value(&other.commutator_trace_minus_two, &base.commutator_trace_minus_two));
            prop_assert!(same_value(&other.min, &base.min));
        }
    }

    #[test]
    fn commutator_trace_matches_the_trace_identity(p in prop_oneof![Just(2u32), Just(5)], seed in any::<u64>()) {
        let f = padic(p);
        let mut r = rng(seed);
        let (a, b) = (random_sl2(&mut r, f, 4), random_sl2(&mut r, f, 4));
        prop_assert!(commutator(&a, &b).trace().agrees_with(&fricke_commutator_trace(&a, &b)));
    }

    #[test]
    fn hyperbolic_first_generator_is_strict(seed in any::<u64>()) {
        let f = padic(5);
        let mut r = rng(seed);
        let k = r.gen_range(1..=3);
        let a = random_hyperbolic(&mut r, f, k);
        let b = random_sl2(&mut r, f, 3);
        prop_assume!(!classify(&a).is_elliptic());
        let report = sharp_test(&a, &b, DEFAULT_OVERLAP_RADIUS);
        prop_assert!(matches!(report.lhs.trace_sq_minus_four, ValResult::Exact(v) if v < 0));
        prop_assert_eq!(report.sharp.map(|s| s.regime), Some(SharpRegime::Strict));
    }
}
