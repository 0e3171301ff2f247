//! Eventually-constant integer arrays.
//!
//! A [`FinArray`] is a constant `left` tail below `lo`, an explicit window
//! `lo ..= lo + len - 1`, and a constant `right` tail above it. This is
//! enough to represent every array the model family needs, and it keeps
//! reads, writes, extensional equality and `diff` exact and finite.

use alloc::{vec, vec::Vec};
use core::{
    cmp::Ordering,
    hash::{Hash, Hasher},
};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// An integer-indexed array that is constant outside a finite window.
///
/// The stored presentation is kept as constructed, so model files and the
/// family `M_i` keep their windows. Equality and hashing are extensional and
/// go through [`FinArray::canonical`]. Arrays produced by
/// [`FinArray::store`] are always canonical.
#[derive(Clone, Debug)]
pub struct FinArray {
    left: BigInt,
    lo: BigInt,
    window: Vec<BigInt>,
    right: BigInt,
}

/// Which clause of the `diff` interpretation produced an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffCase {
    /// The arrays are equal; the index is 0.
    Equal,
    /// Largest negative index where they differ.
    NegativeDifference,
    /// Smallest (non-negative) index where they differ.
    NonnegativeDifference,
}

impl FinArray {
    pub fn constant(v: impl Into<BigInt>) -> Self {
        let v = v.into();
        FinArray {
            left: v.clone(),
            lo: BigInt::zero(),
            window: Vec::new(),
            right: v,
        }
    }

    /// Array reading `left` below `lo`, `window[n]` at `lo + n`, and `right`
    /// past the window. The presentation is kept as given.
    pub fn from_parts(
        left: impl Into<BigInt>,
        lo: impl Into<BigInt>,
        window: Vec<BigInt>,
        right: impl Into<BigInt>,
    ) -> Self {
        FinArray {
            left: left.into(),
            lo: lo.into(),
            window,
            right: right.into(),
        }
    }

    pub fn left_tail(&self) -> &BigInt {
        &self.left
    }

    pub fn right_tail(&self) -> &BigInt {
        &self.right
    }

    /// First window index. For an empty window this is the first index
    /// reading the right tail.
    pub fn lo(&self) -> &BigInt {
        &self.lo
    }

    /// Last window index (`lo - 1` when the window is empty).
    pub fn hi(&self) -> BigInt {
        &self.lo + BigInt::from(self.window.len()) - 1
    }

    pub fn window(&self) -> &[BigInt] {
        &self.window
    }

    pub fn is_constant(&self) -> bool {
        let c = self.canonical();
        c.window.is_empty() && c.left == c.right
    }

    /// Value at index `j`.
    pub fn read(&self, j: &BigInt) -> &BigInt {
        if j < &self.lo {
            return &self.left;
        }
        match (j - &self.lo).to_usize() {
            Some(off) if off < self.window.len() => &self.window[off],
            _ => &self.right,
        }
    }

    /// Trims window edges that repeat the adjacent tail. A constant array is
    /// normalized to `lo = 0`.
    pub fn canonical(&self) -> FinArray {
        let mut start = 0;
        let mut end = self.window.len();
        while start < end && self.window[start] == self.left {
            start += 1;
        }
        while start < end && self.window[end - 1] == self.right {
            end -= 1;
        }
        let lo = if start == end && self.left == self.right {
            BigInt::zero()
        } else {
            &self.lo + BigInt::from(start)
        };
        FinArray {
            left: self.left.clone(),
            lo,
            window: self.window[start..end].to_vec(),
            right: self.right.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        let c = self.canonical();
        c.lo == self.lo && c.window == self.window
    }

    /// Copy of the array with index `j` set to `v`, in canonical form.
    pub fn store(&self, j: &BigInt, v: &BigInt) -> FinArray {
        if self.read(j) == v {
            return self.canonical();
        }
        let c = self.canonical();
        let (from, to) = if c.window.is_empty() && c.left == c.right {
            (j.clone(), j.clone())
        } else {
            let hi = c.hi();
            (core::cmp::min(c.lo.clone(), j.clone()), core::cmp::max(hi, j.clone()))
        };
        let len = (&to - &from + 1u32)
            .to_usize()
            .expect("store window exceeds addressable memory");
        let mut window = Vec::with_capacity(len);
        let mut idx = from.clone();
        for _ in 0..len {
            window.push(if &idx == j { v.clone() } else { c.read(&idx).clone() });
            idx += 1u32;
        }
        FinArray {
            left: c.left.clone(),
            lo: from,
            window,
            right: c.right.clone(),
        }
        .canonical()
    }

    /// Maximal runs of equal values: `(start, value)` pairs in increasing
    /// order, the first run starting at minus infinity (`None`). Adjacent runs
    /// hold different values.
    pub fn runs(&self) -> Vec<(Option<BigInt>, BigInt)> {
        let c = self.canonical();
        let mut out: Vec<(Option<BigInt>, BigInt)> = vec![(None, c.left.clone())];
        let mut idx = c.lo.clone();
        for v in c.window.iter().chain(core::iter::once(&c.right)) {
            if out.last().map(|(_, w)| w) != Some(v) {
                out.push((Some(idx.clone()), v.clone()));
            }
            idx += 1u32;
        }
        out
    }

    /// Indices where the value may change, plus enough context for a caller
    /// to find one representative per constant piece: every window index and
    /// the first index past the window.
    fn breakpoints(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.window.len() + 1);
        let mut idx = self.lo.clone();
        for _ in 0..=self.window.len() {
            out.push(idx.clone());
            idx += 1u32;
        }
        out
    }

    /// `diff` under the fixed interpretation: 0 if the arrays are equal, else
    /// the largest negative index where they differ, else the smallest
    /// index where they differ.
    pub fn diff(&self, other: &FinArray) -> (DiffCase, BigInt) {
        let mut cuts = self.breakpoints();
        cuts.extend(other.breakpoints());
        cuts.sort();
        cuts.dedup();

        // Pieces are [cuts[n], cuts[n+1] - 1], plus (-inf, cuts[0] - 1] and
        // [cuts.last(), +inf). Both arrays are constant on every piece.
        let minus_one = -BigInt::one();
        let mut best_negative: Option<BigInt> = None;
        let mut best_nonnegative: Option<BigInt> = None;
        let first = &cuts[0] - 1u32;
        let mut consider = |from: Option<&BigInt>, to: Option<&BigInt>, probe: &BigInt| {
            if self.read(probe) == other.read(probe) {
                return;
            }
            // Negative part: largest index <= min(to, -1) if it is >= from.
            let neg_top = match to {
                Some(t) if t < &minus_one => t.clone(),
                _ => minus_one.clone(),
            };
            if from.map_or(true, |f| f <= &neg_top) && best_negative.as_ref().map_or(true, |b| &neg_top > b) {
                best_negative = Some(neg_top);
            }
            let zero = BigInt::zero();
            let nonneg_bottom = match from {
                Some(f) if f > &zero => f.clone(),
                _ => zero,
            };
            if to.map_or(true, |t| t >= &nonneg_bottom)
                && best_nonnegative.as_ref().map_or(true, |b| &nonneg_bottom < b)
            {
                best_nonnegative = Some(nonneg_bottom);
            }
        };
        consider(None, Some(&first), &first);
        for w in cuts.windows(2) {
            let end = &w[1] - 1u32;
            consider(Some(&w[0]), Some(&end), &w[0]);
        }
        let last = cuts.last().unwrap();
        consider(Some(last), None, last);

        match (best_negative, best_nonnegative) {
            (Some(j), _) => (DiffCase::NegativeDifference, j),
            (None, Some(j)) => (DiffCase::NonnegativeDifference, j),
            (None, None) => (DiffCase::Equal, BigInt::zero()),
        }
    }

    pub fn diff_index(&self, other: &FinArray) -> BigInt {
        self.diff(other).1
    }

    /// `self(j) == other(j)` for every `j <= bound`.
    pub fn agrees_up_to(&self, other: &FinArray, bound: &BigInt) -> bool {
        if self.left != other.left {
            return false;
        }
        let lo = core::cmp::min(&self.lo, &other.lo).clone();
        let mut j = lo;
        while &j <= bound {
            if self.read(&j) != other.read(&j) {
                return false;
            }
            // Past both windows only the right tails are left to compare.
            if j > self.hi() && j > other.hi() {
                return self.right == other.right;
            }
            j += 1u32;
        }
        true
    }

    /// `self(j) == self(bound)` for every `j > bound`.
    pub fn constant_above(&self, bound: &BigInt) -> bool {
        let pivot = self.read(bound);
        if self.right != *pivot {
            return false;
        }
        let mut j = core::cmp::max(bound + 1u32, self.lo.clone());
        let hi = self.hi();
        while j <= hi {
            if self.read(&j) != pivot {
                return false;
            }
            j += 1u32;
        }
        true
    }
}

impl PartialEq for FinArray {
    fn eq(&self, other: &Self) -> bool {
        if self.left != other.left || self.right != other.right {
            return false;
        }
        let (a, b) = (self.canonical(), other.canonical());
        a.lo == b.lo && a.window == b.window
    }
}

impl Eq for FinArray {}

impl Hash for FinArray {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.left.hash(state);
        c.lo.hash(state);
        c.window.hash(state);
        c.right.hash(state);
    }
}

impl PartialOrd for FinArray {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders canonical presentations lexicographically; only used to keep
/// collections of arrays deterministic.
impl Ord for FinArray {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.canonical(), other.canonical());
        (&a.left, &a.lo, &a.window, &a.right).cmp(&(&b.left, &b.lo, &b.window, &b.right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn window(vs: &[i64]) -> Vec<BigInt> {
        vs.iter().map(|&v| big(v)).collect()
    }

    // Independent scan used as the oracle for diff.
    fn scan_diff(s: &FinArray, t: &FinArray, radius: i64) -> BigInt {
        let differs = |j: i64| s.read(&big(j)) != t.read(&big(j));
        if let Some(j) = (-radius..0).rev().find(|&j| differs(j)) {
            return big(j);
        }
        (0..=radius).find(|&j| differs(j)).map_or(big(0), big)
    }

    #[test]
    fn canonical_trims_and_normalizes() {
        let a = FinArray::from_parts(0, 1, window(&[1, 1, 2, 2]), 2);
        let c = a.canonical();
        assert_eq!(c.lo(), &big(1));
        assert_eq!(c.window(), &window(&[1, 1])[..]);
        assert!(c.is_canonical());
        assert!(!a.is_canonical());
        assert_eq!(a, c);

        let k = FinArray::from_parts(3, 7, window(&[3, 3]), 3).canonical();
        assert_eq!(k.lo(), &big(0));
        assert!(k.window().is_empty());
        assert!(k.is_constant());
    }

    #[test]
    fn step_without_window_is_canonical() {
        let step = FinArray::from_parts(0, 6, Vec::new(), 1);
        assert!(step.is_canonical());
        assert_eq!(step.read(&big(5)), &big(0));
        assert_eq!(step.read(&big(6)), &big(1));
        // The same step with a redundant window compares equal.
        assert_eq!(step, FinArray::from_parts(0, 4, window(&[0, 0, 1]), 1));
        assert_ne!(step, FinArray::from_parts(0, 5, Vec::new(), 1));
    }

    #[test]
    fn store_on_constant_and_idempotent_store() {
        let zero = FinArray::constant(0);
        assert_eq!(zero.store(&big(5), &big(0)), zero);
        assert!(zero.store(&big(5), &big(0)).is_canonical());
        let s = zero.store(&big(5), &big(1));
        assert_eq!(s.lo(), &big(5));
        assert_eq!(s.window(), &window(&[1])[..]);
    }

    #[test]
    fn store_extends_window_left() {
        let a = FinArray::from_parts(0, 1, window(&[1, 1, 2, 2]), 2);
        let s = a.store(&big(-2), &big(9));
        assert!(s.is_canonical());
        assert_eq!(s.lo(), &big(-2));
        for j in -10..=10 {
            let expect = if j == -2 { big(9) } else { a.read(&big(j)).clone() };
            assert_eq!(s.read(&big(j)), &expect, "index {j}");
        }
    }

    #[test]
    fn diff_cases() {
        let zero = FinArray::constant(0);
        assert_eq!(zero.diff(&zero), (DiffCase::Equal, big(0)));
        let t = zero.store(&big(5), &big(1));
        assert_eq!(zero.diff(&t), (DiffCase::NonnegativeDifference, big(5)));
        assert_eq!(scan_diff(&zero, &t, 20), big(5));

        let u = zero.store(&big(-3), &big(1)).store(&big(2), &big(1));
        assert_eq!(zero.diff(&u), (DiffCase::NegativeDifference, big(-3)));

        // Left tails differ: every sufficiently negative index differs.
        let s = FinArray::from_parts(0, 5, Vec::new(), 1);
        let t = FinArray::from_parts(1, 5, Vec::new(), 1);
        assert_eq!(s.diff(&t), (DiffCase::NegativeDifference, big(-1)));
        let s = FinArray::from_parts(0, -8, Vec::new(), 1);
        let t = FinArray::from_parts(1, -8, Vec::new(), 1);
        assert_eq!(s.diff(&t), (DiffCase::NegativeDifference, big(-9)));
        assert_eq!(scan_diff(&s, &t, 20), big(-9));

        // Right tails differ only.
        let s = FinArray::from_parts(0, -30, Vec::new(), 0);
        let t = FinArray::from_parts(0, 40, Vec::new(), 1);
        assert_eq!(s.diff(&t), (DiffCase::NonnegativeDifference, big(40)));
    }

    #[test]
    fn agreement_and_suffix_checks() {
        let a = FinArray::from_parts(0, 1, window(&[1, 1, 2]), 2);
        let b = FinArray::from_parts(0, 1, window(&[1, 1, 2, 2]), 3);
        assert!(a.agrees_up_to(&b, &big(4)));
        assert!(!a.agrees_up_to(&b, &big(5)));
        assert!(a.constant_above(&big(3)));
        assert!(!a.constant_above(&big(2)));
        assert!(!b.constant_above(&big(3)));
        assert!(b.constant_above(&big(5)));
    }

    #[test]
    fn runs_merge_equal_neighbours() {
        let a = FinArray::from_parts(0, 1, window(&[1, 1, 2, 2]), 2);
        let runs = a.runs();
        assert_eq!(
            runs,
            vec![(None, big(0)), (Some(big(1)), big(1)), (Some(big(3)), big(2))]
        );
    }
}
