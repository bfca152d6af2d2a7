//! k-uniform hypergraphs on at most 64 labeled vertices.

use crate::binom::small_binom;
use crate::error::{invalid, Error, Result};
use crate::vset::{subsets, subsets_of_range, VertexSet, MAX_VERTICES};
use rand::Rng;
use std::collections::{HashMap, HashSet};

/// A k-uniform hypergraph on the vertex set `[0, n)`.
///
/// Edges are kept in lexicographic order, so iteration (and everything built
/// on it, such as solver traces) is deterministic. Values are immutable once
/// built.
///
/// `k <= n` is required whenever the edge set is non-empty; an induced
/// sub-hypergraph on fewer than `k` vertices is the one legal exception.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<VertexSet>,
    lookup: HashSet<VertexSet>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary edges. Duplicates collapse (set
    /// semantics); every edge must have exactly `k` vertices in `[0, n)`.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(invalid(format!("n = {n} exceeds the supported maximum of {MAX_VERTICES}")));
        }
        if k == 0 {
            return Err(invalid("uniformity k must be at least 1"));
        }
        if k > n {
            return Err(invalid(format!("uniformity k = {k} exceeds n = {n}")));
        }
        Self::build(n, k, edges)
    }

    fn build(n: usize, k: usize, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let universe = VertexSet::range(0, n);
        let mut lookup = HashSet::new();
        for e in edges {
            if e.len() != k {
                return Err(invalid(format!("edge {e:?} does not have {k} vertices")));
            }
            if !e.is_subset(universe) {
                return Err(invalid(format!("edge {e:?} leaves the vertex range [0, {n})")));
            }
            lookup.insert(e);
        }
        let mut edges: Vec<_> = lookup.iter().copied().collect();
        edges.sort_unstable();
        Ok(Hypergraph { n, k, edges, lookup })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, [])
    }

    /// The complete hypergraph `K_n^k`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::from_predicate(n, k, |_| true)
    }

    /// All k-sets of `[0, n)` satisfying `keep`.
    pub fn from_predicate(n: usize, k: usize, mut keep: impl FnMut(VertexSet) -> bool) -> Result<Self> {
        if n > MAX_VERTICES || k == 0 || k > n {
            return Self::new(n, k, []);
        }
        let edges: Vec<_> = subsets_of_range(n, k).filter(|&e| keep(e)).collect();
        let lookup = edges.iter().copied().collect();
        Ok(Hypergraph { n, k, edges, lookup })
    }

    /// Binomial random hypergraph: each k-set is an edge independently with
    /// probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("edge probability {p} outside [0, 1]")));
        }
        Self::from_predicate(n, k, |_| rng.gen_bool(p))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(0, self.n)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_edge(&self, e: VertexSet) -> bool {
        self.lookup.contains(&e)
    }

    fn check_query(&self, s: VertexSet) -> Result<()> {
        if s.len() > self.k {
            return Err(Error::InvalidQuery(format!(
                "query set of size {} exceeds uniformity {}",
                s.len(),
                self.k
            )));
        }
        if !s.is_subset(self.vertices()) {
            return Err(Error::InvalidQuery(format!("query set {s:?} leaves [0, {})", self.n)));
        }
        Ok(())
    }

    /// `d_H(S)`: the number of edges containing `s`.
    pub fn degree(&self, s: VertexSet) -> Result<u64> {
        self.check_query(s)?;
        Ok(self.edges.iter().filter(|e| s.is_subset(**e)).count() as u64)
    }

    /// `N_H(S)`: the `(k-|S|)`-sets completing `s` to an edge, in lexicographic order.
    pub fn neighborhood(&self, s: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_query(s)?;
        Ok(self.edges.iter().filter(|e| s.is_subset(**e)).map(|e| e.difference(s)).collect())
    }

    /// Degrees of every ℓ-set that lies in at least one edge.
    pub(crate) fn degree_table(&self, l: usize) -> HashMap<VertexSet, u64> {
        let mut table = HashMap::new();
        for &e in &self.edges {
            for s in subsets(e, l) {
                *table.entry(s).or_insert(0) += 1;
            }
        }
        table
    }

    /// Minimum ℓ-degree `δ_ℓ(H)`; `δ_0(H) = |E(H)|`.
    pub fn min_l_degree(&self, l: usize) -> Result<u64> {
        if l >= self.k {
            return Err(Error::InvalidQuery(format!("ℓ = {l} must be below k = {}", self.k)));
        }
        if l == 0 {
            return Ok(self.edges.len() as u64);
        }
        if l > self.n {
            // no ℓ-sets at all; the minimum over an empty family is vacuous
            return Ok(0);
        }
        let table = self.degree_table(l);
        if (table.len() as u64) < small_binom(self.n, l) {
            return Ok(0);
        }
        Ok(table.values().copied().min().unwrap_or(0))
    }

    /// Complement within `binom([0,n), k)`.
    pub fn complement(&self) -> Hypergraph {
        let edges: Vec<_> = subsets_of_range(self.n, self.k).filter(|e| !self.is_edge(*e)).collect();
        let lookup = edges.iter().copied().collect();
        Hypergraph { n: self.n, k: self.k, edges, lookup }
    }

    /// `H[A]` relabeled onto `[0, |A|)` preserving the relative order of `A`.
    pub fn induced(&self, a: VertexSet) -> Result<Hypergraph> {
        if !a.is_subset(self.vertices()) {
            return Err(invalid(format!("{a:?} is not a subset of [0, {})", self.n)));
        }
        let mut relabel = [usize::MAX; MAX_VERTICES];
        for (new, old) in a.iter().enumerate() {
            relabel[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.is_subset(a))
            .map(|e| e.iter().map(|v| relabel[v]).collect::<VertexSet>());
        Self::build(a.len(), self.k, edges)
    }

    /// Edges of `H` lying inside `a`, without relabeling.
    pub fn edges_within(&self, a: VertexSet) -> impl Iterator<Item = VertexSet> + '_ {
        self.edges.iter().copied().filter(move |e| e.is_subset(a))
    }

    /// Edge set symmetric difference size `|E(self) △ E(other)|`.
    pub fn symmetric_difference(&self, other: &Hypergraph) -> usize {
        let only_self = self.edges.iter().filter(|e| !other.is_edge(**e)).count();
        let only_other = other.edges.iter().filter(|e| !self.is_edge(**e)).count();
        only_self + only_other
    }

    /// The hypergraph with the membership of `e` flipped.
    pub fn toggled(&self, e: VertexSet) -> Result<Hypergraph> {
        let mut lookup = self.lookup.clone();
        if !lookup.remove(&e) {
            lookup.insert(e);
        }
        Self::new(self.n, self.k, lookup)
    }
}

/// Neighborhoods of every `size`-set in one pass over the edges.
pub(crate) fn neighborhood_index(h: &Hypergraph, size: usize) -> HashMap<VertexSet, Vec<VertexSet>> {
    let mut index: HashMap<VertexSet, Vec<VertexSet>> = HashMap::new();
    for &e in h.edges() {
        for s in subsets(e, size) {
            index.entry(s).or_default().push(e.difference(s));
        }
    }
    index
}
