//! Subsets of a ground set `{0, .., n-1}` with bit-vector semantics.

use crate::error::Error;
use crate::Result;
use std::fmt;

/// A subset of the ground set `{0, .., n-1}`, stored as a packed bit vector.
///
/// All set algebra (union, intersection, difference, subset tests,
/// cardinality) is exact. Two sets are comparable only when they share a
/// ground size; mixing ground sizes is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    n: usize,
    blocks: Vec<u64>,
}

fn block_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl ElementSet {
    /// The empty subset of `{0, .., n-1}`.
    pub fn empty(n: usize) -> Self {
        ElementSet {
            n,
            blocks: vec![0; block_count(n)],
        }
    }

    /// The full ground set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    /// Builds a set from member indices. Fails on out-of-range members.
    pub fn from_indices(n: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n);
        for &i in members {
            if i >= n {
                return Err(Error::ElementOutOfRange {
                    element: i,
                    universe: n,
                });
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Builds a set over `{0, .., n-1}` (n ≤ 64) from a bit mask whose least
    /// significant bit is element 0. Used by subset-lattice enumeration and
    /// the binary-counter tabulation order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        debug_assert!(n == 64 || mask < (1u64 << n));
        ElementSet {
            n,
            blocks: vec![mask],
        }
    }

    /// Builds a set directly from packed blocks, masking bits above `n`.
    /// Callers supply exactly `ceil(n/64)` blocks of raw random bits.
    pub(crate) fn from_raw_blocks(n: usize, mut blocks: Vec<u64>) -> Self {
        assert_eq!(blocks.len(), block_count(n));
        if !n.is_multiple_of(64) {
            if let Some(last) = blocks.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
        ElementSet { n, blocks }
    }

    /// The bit mask of a set over a ground set of at most 64 elements.
    pub fn mask(&self) -> u64 {
        assert!(self.n <= 64, "mask() requires n <= 64");
        self.blocks.first().copied().unwrap_or(0)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "element {i} out of range");
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.n, "element {i} out of range");
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    /// `self ∪ {i}` as a new set.
    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    /// `self \ {i}` as a new set.
    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    fn check_same_ground(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "sets over different ground sizes are not comparable"
        );
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a | b)
            .collect();
        ElementSet { n: self.n, blocks }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        ElementSet { n: self.n, blocks }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & !b)
            .collect();
        ElementSet { n: self.n, blocks }
    }

    pub fn complement(&self) -> Self {
        Self::full(self.n).difference(self)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_same_ground(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_same_ground(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// In-place union, used by hot loops that fold many sets together.
    pub fn union_with(&mut self, other: &Self) {
        self.check_same_ground(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// Iterates members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let i = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + i)
                }
            })
        })
    }

    /// Members as a sorted vector.
    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Fixed-width lowercase hex rendering of the bit mask, most significant
    /// nibble first (element 0 is the least significant bit). Width is
    /// `ceil(n/4)` digits so encodings of one ground size align.
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for pos in (0..digits).rev() {
            let bit = pos * 4;
            let nibble = (self.blocks[bit / 64] >> (bit % 64)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Parses the encoding produced by [`ElementSet::to_hex`].
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut s = Self::empty(n);
        for (pos, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Malformed {
                what: "hex set",
                reason: format!("invalid digit {c:?}"),
            })? as u64;
            for bit in 0..4 {
                if nibble >> bit & 1 == 1 {
                    let i = pos * 4 + bit;
                    if i >= n {
                        return Err(Error::ElementOutOfRange {
                            element: i,
                            universe: n,
                        });
                    }
                    s.insert(i);
                }
            }
        }
        Ok(s)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}

/// Enumerates all `2^n` subsets in binary-counter order (mask order).
/// Requires `n ≤ 63` in practice; callers gate on the exhaustive limit.
pub fn all_subsets(n: usize) -> impl Iterator<Item = ElementSet> {
    assert!(n < 64);
    (0u64..1 << n).map(move |mask| ElementSet::from_mask(n, mask))
}

/// Enumerates the size-`size` subsets of `{0, .., k-1}` in lexicographic
/// order of their index vectors, calling `visit` on each. `visit` returns
/// `false` to stop early; the function reports whether enumeration ran to
/// completion.
pub fn for_each_combination(
    k: usize,
    size: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    if size > k {
        return true;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !visit(&idx) {
            return false;
        }
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] != i + k - size {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `C(k, j)` with saturation, for enumeration budgeting.
pub fn binomial(k: usize, j: usize) -> u128 {
    if j > k {
        return 0;
    }
    let j = j.min(k - j);
    let mut acc: u128 = 1;
    for i in 0..j {
        acc = acc.saturating_mul((k - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn basic_algebra() {
        let a = ElementSet::from_indices(5, &[0, 1, 2]).unwrap();
        let b = ElementSet::from_indices(5, &[2, 3, 4]).unwrap();
        assert_eq!(a.union(&b), ElementSet::full(5));
        assert_eq!(a.intersection(&b).to_indices(), vec![2]);
        assert_eq!(a.difference(&b).to_indices(), vec![0, 1]);
        assert_eq!(a.intersection_len(&b), 1);
        assert!(a.intersection(&b).is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn out_of_range_member_rejected() {
        assert!(matches!(
            ElementSet::from_indices(3, &[3]),
            Err(Error::ElementOutOfRange {
                element: 3,
                universe: 3
            })
        ));
    }

    #[test]
    fn hex_round_trip_fixed_width() {
        let s = ElementSet::from_indices(30, &[0, 4, 29]).unwrap();
        let hex = s.to_hex();
        assert_eq!(hex.len(), 8);
        assert_eq!(hex, "20000011");
        assert_eq!(ElementSet::from_hex(30, &hex).unwrap(), s);
    }

    #[test]
    fn hex_handles_wide_ground_sets() {
        let s = ElementSet::from_indices(130, &[0, 64, 129]).unwrap();
        let back = ElementSet::from_hex(130, &s.to_hex()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn combinations_enumerate_choose() {
        let mut count = 0u64;
        for_each_combination(6, 3, |idx| {
            assert!(idx.windows(2).all(|w| w[0] < w[1]));
            count += 1;
            true
        });
        assert_eq!(count as u128, binomial(6, 3));
        assert_eq!(binomial(6, 3), 20);
    }

    #[test]
    fn combinations_empty_and_degenerate() {
        let mut seen = Vec::new();
        for_each_combination(4, 0, |idx| {
            seen.push(idx.to_vec());
            true
        });
        assert_eq!(seen, vec![Vec::<usize>::new()]);
        let mut hits = 0;
        for_each_combination(2, 3, |_| {
            hits += 1;
            true
        });
        assert_eq!(hits, 0);
    }

    proptest! {
        #[test]
        fn matches_btreeset_model(
            xs in prop::collection::vec(0usize..40, 0..30),
            ys in prop::collection::vec(0usize..40, 0..30),
        ) {
            let a = ElementSet::from_indices(40, &xs).unwrap();
            let b = ElementSet::from_indices(40, &ys).unwrap();
            let ma: BTreeSet<_> = xs.iter().copied().collect();
            let mb: BTreeSet<_> = ys.iter().copied().collect();

            prop_assert_eq!(a.len(), ma.len());
            prop_assert_eq!(
                a.union(&b).to_indices(),
                ma.union(&mb).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(
                a.intersection(&b).to_indices(),
                ma.intersection(&mb).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(
                a.difference(&b).to_indices(),
                ma.difference(&mb).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(a.is_subset_of(&b), ma.is_subset(&mb));
            prop_assert_eq!(a.intersection_len(&b), ma.intersection(&mb).count());
        }

        #[test]
        fn hex_round_trips(xs in prop::collection::vec(0usize..100, 0..40)) {
            let s = ElementSet::from_indices(100, &xs).unwrap();
            prop_assert_eq!(ElementSet::from_hex(100, &s.to_hex()).unwrap(), s);
        }
    }
}
