//! Ground sets and subsets of `{0, ..., n}` stored as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground set a [`Subset`] can index.
pub const MAX_GROUND: usize = 64;

/// Default ground-set cap. Flat and chain enumeration is exponential in the
/// ground-set size, so constructors refuse anything larger unless asked.
pub const DEFAULT_CAP: usize = 20;

/// Size limits applied by the matroid constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub cap: usize,
}

impl Limits {
    pub fn new(cap: usize) -> Result<Self> {
        if cap == 0 || cap > MAX_GROUND {
            return Err(Error::CapExceeded { size: cap, cap: MAX_GROUND });
        }
        Ok(Limits { cap })
    }

    pub(crate) fn check(&self, size: usize) -> Result<()> {
        if size > self.cap {
            Err(Error::CapExceeded { size, cap: self.cap })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: DEFAULT_CAP }
    }
}

/// The ground set `{0, ..., size - 1}` of a matroid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    /// A ground set of `size` elements, checked against the default cap.
    pub fn new(size: usize) -> Result<Self> {
        Self::with_limits(size, Limits::default())
    }

    pub fn with_limits(size: usize, limits: Limits) -> Result<Self> {
        limits.check(size)?;
        Ok(GroundSet { size })
    }

    /// Ground sets produced internally by minors; they never exceed their
    /// parent so no cap check is needed.
    pub(crate) fn unchecked(size: usize) -> Self {
        debug_assert!(size <= MAX_GROUND);
        GroundSet { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    pub fn check(&self, s: Subset) -> Result<()> {
        match s.last() {
            Some(e) if e >= self.size => Err(Error::ElementOutOfRange { element: e, ground: self.size }),
            _ => Ok(()),
        }
    }
}

/// A subset of the ground set.
///
/// Ordering is lexicographic on the sorted member lists, so `{0} < {0,1} <
/// {0,2} < {1}`. Every enumeration in the crate emits in this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, ..., size - 1}`.
    pub fn full(size: usize) -> Self {
        if size >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << size) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        Subset(1u64 << e)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u64 << e);
    }

    pub fn with(self, e: usize) -> Self {
        Subset(self.0 | 1u64 << e)
    }

    pub fn without(self, e: usize) -> Self {
        Subset(self.0 & !(1u64 << e))
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Relabel through `labels`, which maps new indices to old ones: the
    /// result contains `i` iff `self` contains `labels[i]`.
    pub fn pull_back(self, labels: &[usize]) -> Subset {
        labels
            .iter()
            .enumerate()
            .filter(|&(_, &old)| self.contains(old))
            .map(|(new, _)| new)
            .collect()
    }

    /// Inverse of [`Subset::pull_back`]: map new labels to old ones.
    pub fn push_forward(self, labels: &[usize]) -> Subset {
        self.iter().map(|i| labels[i]).collect()
    }

    /// All `k`-element subsets of `{0, ..., n-1}` in lexicographic order.
    pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
        fn rec(start: usize, n: usize, k: usize, cur: Subset, out: &mut Vec<Subset>) {
            if k == 0 {
                out.push(cur);
                return;
            }
            for e in start..n {
                if n - e < k {
                    break;
                }
                rec(e + 1, n, k - 1, cur.with(e), out);
            }
        }
        let mut out = Vec::new();
        if k <= n {
            rec(0, n, k, Subset::EMPTY, &mut out);
        }
        out
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Subset::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for Subset {
    fn from(elems: [usize; N]) -> Self {
        elems.into_iter().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(deserializer)?;
        let mut s = Subset::EMPTY;
        for e in elems {
            if e >= MAX_GROUND {
                return Err(serde::de::Error::custom(format!("element {e} exceeds {MAX_GROUND}")));
            }
            if s.contains(e) {
                return Err(serde::de::Error::custom(format!("duplicate element {e}")));
            }
            s.insert(e);
        }
        Ok(s)
    }
}

/// Ascending iterator over the members of a [`Subset`].
#[derive(Clone)]
pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter {}
