//! Random finite arrays and the `diff` axiom check used by `verify-paper`.

use apf_core::FinArray;
use num_bigint::BigInt;
use rand::Rng;

/// A random array with tails and window entries in `[-3, 3]`, `lo` in
/// `[-10, 10]` and at most 8 window entries.
pub fn random_array(rng: &mut impl Rng) -> FinArray {
    let v = |rng: &mut dyn rand::RngCore| BigInt::from(rng.gen_range(-3i64..=3));
    let len = rng.gen_range(0..=8);
    let window = (0..len).map(|_| v(rng)).collect();
    FinArray::from_parts(v(rng), rng.gen_range(-10i64..=10), window, v(rng))
}

/// A second array unequal to `s`: either independent or `s` with a few
/// writes.
pub fn random_partner(rng: &mut impl Rng, s: &FinArray) -> FinArray {
    loop {
        let t = if rng.gen_bool(0.5) {
            random_array(rng)
        } else {
            let mut t = s.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let j = BigInt::from(rng.gen_range(-14i64..=14));
                let v = BigInt::from(rng.gen_range(-3i64..=3));
                t = t.store(&j, &v);
            }
            t
        };
        if &t != s {
            return t;
        }
    }
}

/// An interval containing both windows and one index beyond each side.
pub fn covering_interval(s: &FinArray, t: &FinArray) -> (BigInt, BigInt) {
    let lo = s.lo().min(t.lo()) - 1u32;
    let hi = s.hi().max(t.hi()).max(s.lo() - 1u32).max(t.lo() - 1u32) + 1u32;
    (lo, hi)
}

/// `diff` recomputed by scanning the covering interval.
pub fn scan_diff(s: &FinArray, t: &FinArray) -> BigInt {
    let (lo, hi) = covering_interval(s, t);
    let differs = |j: &BigInt| s.read(j) != t.read(j);
    let bottom = lo.min(BigInt::from(-1));
    let mut j = BigInt::from(-1);
    while j >= bottom {
        if differs(&j) {
            return j;
        }
        j -= 1u32;
    }
    let top = hi.max(BigInt::from(0));
    let mut j = BigInt::from(0);
    while j <= top {
        if differs(&j) {
            return j;
        }
        j += 1u32;
    }
    BigInt::from(0)
}

/// `s(diff(s, t)) != t(diff(s, t))` for unequal arrays, and `diff` agrees
/// with the scan.
pub fn diff_axiom_holds(s: &FinArray, t: &FinArray) -> bool {
    let d = s.diff_index(t);
    (s == t || s.read(&d) != t.read(&d)) && d == scan_diff(s, t)
}
