//! Vertex sets over `[0, 64)` backed by a single machine word.
//!
//! The public contract is the strictly increasing index list; the bitmask is
//! an implementation detail exposed through [`VertexSet::bits`] for callers
//! that need fast disjointness tests.

use crate::binom::small_binom;
use crate::error::{invalid, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// Builds a set from indices, rejecting duplicates and indices >= 64.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut bits = 0u64;
        for v in indices {
            if v >= MAX_VERTICES {
                return Err(invalid(format!("vertex index {v} exceeds the supported range")));
            }
            if bits & (1 << v) != 0 {
                return Err(invalid(format!("duplicate vertex {v}")));
            }
            bits |= 1 << v;
        }
        Ok(VertexSet(bits))
    }

    /// Like [`from_indices`](Self::from_indices) but additionally requires the
    /// input to be strictly increasing, as the text and JSON formats demand.
    pub fn from_sorted_indices(indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("indices not strictly increasing: {indices:?}")));
        }
        Self::from_indices(indices.iter().copied())
    }

    /// `{lo, lo+1, ..., hi-1}`.
    pub fn range(lo: usize, hi: usize) -> Self {
        debug_assert!(lo <= hi && hi <= MAX_VERTICES);
        if lo >= hi {
            return Self::EMPTY;
        }
        let width = hi - lo;
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        VertexSet(mask << lo)
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest index plus one, i.e. the smallest `n` with `self ⊆ [0, n)`.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The `count` smallest members.
    pub fn first(self, count: usize) -> Self {
        self.iter().take(count).collect()
    }

    /// Colex rank among all subsets of the same size; a bijection from
    /// `binom([0,n), s)` onto `[0, binom(n, s))`.
    pub fn colex_rank(self) -> usize {
        self.iter()
            .enumerate()
            .map(|(i, v)| small_binom(v, i + 1) as usize)
            .sum()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone)]
pub struct Indices(u64);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().fold(0, |acc, v| acc | 1 << v))
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Indices;

    fn into_iter(self) -> Indices {
        self.iter()
    }
}

/// Lexicographic order on the sorted index lists, so that `{0,1,5} < {0,2,3}`
/// and a proper prefix sorts first.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        let above = |bits: u64| if low == 63 { 0 } else { bits >> (low + 1) };
        if self.0 & (1 << low) != 0 {
            // self continues with `low`; other continues with something larger or ends
            if above(other.0) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if above(self.0) != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    /// Space-separated indices, the line format of the text codec.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        VertexSet::from_sorted_indices(&raw).map_err(serde::de::Error::custom)
    }
}

/// All `size`-subsets of `universe` in lexicographic order.
pub fn subsets(universe: VertexSet, size: usize) -> Subsets {
    let pool = universe.to_vec();
    let positions = if size <= pool.len() { Some((0..size).collect()) } else { None };
    Subsets { pool, positions }
}

/// All `size`-subsets of `[0, n)` in lexicographic order.
pub fn subsets_of_range(n: usize, size: usize) -> Subsets {
    subsets(VertexSet::range(0, n), size)
}

pub struct Subsets {
    pool: Vec<usize>,
    positions: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let pos = self.positions.as_mut()?;
        let current: VertexSet = pos.iter().map(|&i| self.pool[i]).collect();
        let m = self.pool.len();
        let s = pos.len();
        // advance to the next combination of positions
        let mut i = s;
        loop {
            if i == 0 {
                self.positions = None;
                break;
            }
            i -= 1;
            if pos[i] < m - s + i {
                pos[i] += 1;
                for j in i + 1..s {
                    pos[j] = pos[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}
