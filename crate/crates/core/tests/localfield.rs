mod common;

use btj_core::localfield::{format_element, parse_element, FieldDesc, ValResult};
use common::*;
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = FieldDesc> {
    prop_oneof![
        Just(padic(2)),
        Just(padic(3)),
        Just(padic(7)),
        Just(laurent(2)),
        Just(laurent(5)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(256) })]

    #[test]
    fn division_and_inverse(f in fields(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, vx) = random_element(&mut r, f, -6, 6);
        let (y, vy) = random_element(&mut r, f, -6, 6);
        let q = x.div(&y).unwrap();
        prop_assert_eq!(q.valuation(), ValResult::Exact(vx - vy));
        prop_assert!((&q * &y).agrees_with(&x));
        prop_assert!((&x * &x.inv().unwrap()).agrees_with_int(1));
    }

    #[test]
    fn cancellation_is_zero_like(f in fields(), seed in any::<u64>()) {
        let (x, vx) = random_element(&mut rng(seed), f, -6, 6);
        let z = &x - &x;
        prop_assert!(z.is_zero_like());
        prop_assert!(!z.is_exact_zero());
        prop_assert!(z.valuation().lower_bound() >= vx);
    }

    #[test]
    fn literals_round_trip(f in fields(), seed in any::<u64>()) {
        let (x, _) = random_element(&mut rng(seed), f, -6, 6);
        let back = parse_element(&format_element(&x), f).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn powers_add_valuations(f in fields(), seed in any::<u64>(), k in -5i64..=5) {
        let (x, vx) = random_element(&mut rng(seed), f, -3, 3);
        prop_assert_eq!(x.pow(k).unwrap().valuation(), ValResult::Exact(k * vx));
    }
}

#[test]
fn rationals_with_known_valuations() {
    let f = padic(3);
    for (num, den, v) in [(9, 1, 2), (1, 27, -3), (18, 4, 2), (5, 7, 0), (-81, 2, 4)] {
        assert_eq!(
            f.from_rational(num, den).unwrap().valuation(),
            ValResult::Exact(v)
        );
    }
}
