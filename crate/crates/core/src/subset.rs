//! Bitmask subsets of the message index set.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported number of messages. Every algorithm in the crate
/// enumerates the power set, so the mask must fit comfortably in a `u32`
/// and `2^n` tables must fit in memory.
pub const MAX_MESSAGES: usize = 20;

/// A subset of `{0, .., n-1}` stored as a bitmask (bit `i` is message `i`).
///
/// Indices are zero-based inside the crate. The one-based labels used in
/// problem files only appear in [`SubsetId::from_one_based`],
/// [`SubsetId::to_one_based`] and the `Display` impl.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetId(pub u32);

impl SubsetId {
    pub const EMPTY: SubsetId = SubsetId(0);

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_MESSAGES);
        SubsetId(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        SubsetId(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SubsetId(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    /// Builds a subset from one-based labels, as written in problem files.
    pub fn from_one_based(labels: &[usize]) -> Self {
        Self::from_indices(labels.iter().map(|&l| l - 1))
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        SubsetId(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        SubsetId(self.0 & !(1 << i))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        SubsetId(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        SubsetId(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        SubsetId(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        SubsetId(!self.0 & Self::full(n).0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ascending element indices.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self`, in ascending bitmask order (including `∅` and `self`).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// All subsets of `{0, .., n-1}` in ascending bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = SubsetId> {
        (0..1u32 << n).map(SubsetId)
    }
}

impl fmt::Debug for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders with one-based labels, e.g. `{1,3,5}`.
impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = SubsetId;

    fn next(&mut self) -> Option<SubsetId> {
        let cur = self.next?;
        // standard submask increment: (cur - mask) & mask walks submasks upward
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(SubsetId(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_in_ascending_order() {
        let s = SubsetId::from_indices([0, 2, 3]);
        let subs: Vec<u32> = s.subsets().map(|x| x.0).collect();
        assert_eq!(subs, vec![0, 1, 4, 5, 8, 9, 12, 13]);
        assert_eq!(SubsetId::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(SubsetId::from_one_based(&[1, 3, 5]).to_string(), "{1,3,5}");
        assert_eq!(SubsetId::EMPTY.to_string(), "{}");
    }

    #[test]
    fn complement_stays_within_n() {
        let s = SubsetId::from_indices([1]);
        assert_eq!(s.complement(3), SubsetId::from_indices([0, 2]));
        assert_eq!(SubsetId::full(20).complement(20), SubsetId::EMPTY);
    }
}
