mod common;

use apf_core::FinArray;
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn span(s: &FinArray, t: &FinArray) -> (i64, i64) {
    let lo: BigInt = s.lo().min(t.lo()) - 2;
    let hi: BigInt = s.hi().max(t.hi()) + 2;
    (lo.try_into().unwrap(), hi.try_into().unwrap())
}

/// Largest negative differing index, else least nonnegative, else 0.
fn scan(s: &FinArray, t: &FinArray) -> BigInt {
    let (lo, hi) = span(s, t);
    let differs = |j: i64| s.read(&big(j)) != t.read(&big(j));
    if let Some(j) = (lo.min(-1)..=-1).rev().find(|&j| differs(j)) {
        return big(j);
    }
    big((0..=hi.max(0)).find(|&j| differs(j)).unwrap_or(0))
}

fn pair(seed: u64) -> (FinArray, FinArray) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_array(&mut rng);
    let t = if rng.gen_bool(0.4) {
        let mut t = s.clone();
        for _ in 0..rng.gen_range(0..3) {
            t = t.store(&big(rng.gen_range(-25..=25)), &big(rng.gen_range(-3..=3)));
        }
        t
    } else {
        random_array(&mut rng)
    };
    (s, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn diff_matches_scan(seed in any::<u64>()) {
        let (s, t) = pair(seed);
        let d = s.diff_index(&t);
        prop_assert_eq!(&d, &scan(&s, &t));
        prop_assert_eq!(s == t, s.read(&d) == t.read(&d));
        prop_assert_eq!(t.diff_index(&s), d);
    }

    #[test]
    fn equality_is_extensional(seed in any::<u64>()) {
        let (s, t) = pair(seed);
        let (lo, hi) = span(&s, &t);
        let pointwise = (lo..=hi).all(|j| s.read(&big(j)) == t.read(&big(j)))
            && s.left_tail() == t.left_tail()
            && s.right_tail() == t.right_tail();
        prop_assert_eq!(s == t, pointwise);
        prop_assert_eq!(s.canonical() == t.canonical(), pointwise);
    }

    #[test]
    fn padding_is_invisible(seed in any::<u64>(), left in 0usize..3, right in 0usize..3) {
        let (s, _) = pair(seed);
        let mut window = vec![s.left_tail().clone(); left];
        window.extend(s.window().iter().cloned());
        window.extend(vec![s.right_tail().clone(); right]);
        let padded = FinArray::from_parts(s.left_tail().clone(), s.lo() - left, window, s.right_tail().clone());
        prop_assert_eq!(&padded, &s);
        prop_assert_eq!(padded.canonical(), s.canonical());
    }

    #[test]
    fn read_over_write(seed in any::<u64>(), j in -30i64..=30, k in -30i64..=30, v in -5i64..=5) {
        let (s, _) = pair(seed);
        let w = s.store(&big(j), &big(v));
        prop_assert_eq!(w.read(&big(j)), &big(v));
        if j != k {
            prop_assert_eq!(w.read(&big(k)), s.read(&big(k)));
        }
        prop_assert_eq!(w.store(&big(j), s.read(&big(j))), s);
    }

    #[test]
    fn agreement_and_constant_suffix(seed in any::<u64>(), n in -25i64..=25) {
        let (s, t) = pair(seed);
        let expected = (span(&s, &t).0.min(n)..=n).all(|j| s.read(&big(j)) == t.read(&big(j)))
            && s.left_tail() == t.left_tail();
        prop_assert_eq!(s.agrees_up_to(&t, &big(n)), expected);
        let hi = span(&s, &t).1;
        let constant = (n..=hi).all(|j| s.read(&big(j)) == s.right_tail());
        prop_assert_eq!(s.constant_above(&big(n)), constant);
    }
}
