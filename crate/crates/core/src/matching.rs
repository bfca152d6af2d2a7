//! Exact perfect-matching search and a randomized greedy matcher.

use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;
use crate::vset::VertexSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashSet;

/// A set of pairwise disjoint edges, kept in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    edges: Vec<VertexSet>,
}

impl Matching {
    pub fn new(mut edges: Vec<VertexSet>) -> Self {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self) -> VertexSet {
        self.edges.iter().fold(VertexSet::EMPTY, |acc, e| acc.union(*e))
    }

    /// Union with another matching; the caller guarantees disjointness.
    pub fn merged(&self, other: &Matching) -> Matching {
        Matching::new(self.edges.iter().chain(other.edges.iter()).copied().collect())
    }

    pub fn is_perfect_for(&self, h: &Hypergraph) -> bool {
        self.covered() == h.vertices() && self.edges.len() * h.k() == h.n()
    }

    /// `{"perfect": bool, "edges": [[...], ...]}`.
    pub fn report(&self, h: &Hypergraph) -> MatchingReport {
        MatchingReport { perfect: self.is_perfect_for(h), edges: self.edges.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub perfect: bool,
    pub edges: Vec<VertexSet>,
}

/// Solver limits. `node_limit: None` means unbounded.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolverConfig {
    pub node_limit: Option<u64>,
    /// Remember covered-vertex states already proven dead.
    pub transposition_cache: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Matching),
    /// The search space was exhausted: no perfect matching exists.
    Absent,
    /// The node budget ran out before a decision.
    Aborted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
}

enum Step {
    Found,
    Exhausted,
    Aborted,
}

struct Search {
    incident: Vec<Vec<u64>>,
    target: u64,
    nodes: u64,
    limit: u64,
    cache: Option<HashSet<u64>>,
    chosen: Vec<u64>,
}

impl Search {
    fn run(&mut self, covered: u64) -> Step {
        if covered == self.target {
            return Step::Found;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Step::Aborted;
        }
        if self.cache.as_ref().is_some_and(|c| c.contains(&covered)) {
            return Step::Exhausted;
        }

        // fail-first: the uncovered vertex with the fewest live edges, lowest index on ties
        let mut branch = usize::MAX;
        let mut fewest = usize::MAX;
        let mut open = self.target & !covered;
        while open != 0 {
            let v = open.trailing_zeros() as usize;
            open &= open - 1;
            let live = self.incident[v].iter().filter(|&&e| e & covered == 0).count();
            if live == 0 {
                self.remember(covered);
                return Step::Exhausted;
            }
            if live < fewest {
                fewest = live;
                branch = v;
            }
        }

        for i in 0..self.incident[branch].len() {
            let e = self.incident[branch][i];
            if e & covered != 0 {
                continue;
            }
            self.chosen.push(e);
            match self.run(covered | e) {
                Step::Found => return Step::Found,
                Step::Aborted => return Step::Aborted,
                Step::Exhausted => {
                    self.chosen.pop();
                }
            }
        }
        self.remember(covered);
        Step::Exhausted
    }

    fn remember(&mut self, covered: u64) {
        if let Some(cache) = self.cache.as_mut() {
            cache.insert(covered);
        }
    }
}

/// Decides whether `H[target]` has a perfect matching (vertices keep their
/// labels). Candidate edges are tried in lexicographic order, so the result
/// is deterministic.
pub fn solve_within(h: &Hypergraph, target: VertexSet, config: SolverConfig) -> (SolveOutcome, SolveStats) {
    if target.is_empty() {
        return (SolveOutcome::Found(Matching::default()), SolveStats::default());
    }
    if !target.len().is_multiple_of(h.k()) {
        return (SolveOutcome::Absent, SolveStats::default());
    }
    let mut incident = vec![Vec::new(); h.n()];
    for e in h.edges_within(target) {
        for v in e.iter() {
            incident[v].push(e.bits());
        }
    }
    let mut search = Search {
        incident,
        target: target.bits(),
        nodes: 0,
        limit: config.node_limit.unwrap_or(u64::MAX),
        cache: config.transposition_cache.then(HashSet::new),
        chosen: Vec::new(),
    };
    let outcome = match search.run(0) {
        Step::Found => SolveOutcome::Found(Matching::new(
            search.chosen.iter().map(|&b| VertexSet::from_bits(b)).collect(),
        )),
        Step::Exhausted => SolveOutcome::Absent,
        Step::Aborted => SolveOutcome::Aborted,
    };
    (outcome, SolveStats { nodes: search.nodes })
}

/// Full search with explicit limits. Requires `k | n`.
pub fn solve(h: &Hypergraph, config: SolverConfig) -> Result<(SolveOutcome, SolveStats)> {
    if !h.n().is_multiple_of(h.k()) {
        return Err(invalid(format!("k = {} does not divide n = {}", h.k(), h.n())));
    }
    Ok(solve_within(h, h.vertices(), config))
}

/// A perfect matching of `h`, or `None` when none exists. Unbounded search.
pub fn find_perfect_matching(h: &Hypergraph) -> Result<Option<Matching>> {
    match solve(h, SolverConfig::default())?.0 {
        SolveOutcome::Found(m) => Ok(Some(m)),
        SolveOutcome::Absent => Ok(None),
        SolveOutcome::Aborted => unreachable!("unbounded search cannot abort"),
    }
}

/// Maximal matching among `edges` (assumed to be edges of one hypergraph):
/// each step takes a uniformly random edge avoiding the covered vertices.
///
/// Scanning a uniformly shuffled edge list and keeping every edge that is
/// still free has exactly that distribution.
pub fn greedy_from_edges(edges: &[VertexSet], seed: u64) -> Matching {
    let mut order = edges.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut covered = VertexSet::EMPTY;
    let mut picked = Vec::new();
    for e in order {
        if e.is_disjoint(covered) {
            covered = covered.union(e);
            picked.push(e);
        }
    }
    Matching::new(picked)
}

pub fn max_matching_greedy(h: &Hypergraph, seed: u64) -> Matching {
    greedy_from_edges(h.edges(), seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Defect {
    NonEdge,
    Overlap,
    NotPerfect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Defect),
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

pub fn verify_matching(h: &Hypergraph, m: &Matching, require_perfect: bool) -> Verdict {
    let mut covered = VertexSet::EMPTY;
    for &e in m.edges() {
        if !h.is_edge(e) {
            return Verdict::Invalid(Defect::NonEdge);
        }
        if !e.is_disjoint(covered) {
            return Verdict::Invalid(Defect::Overlap);
        }
        covered = covered.union(e);
    }
    if require_perfect && covered != h.vertices() {
        return Verdict::Invalid(Defect::NotPerfect);
    }
    Verdict::Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset::subsets_of_range;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_indices(v.iter().copied()).unwrap()
    }

    fn odd_construction(n: usize, k: usize, a: usize) -> Hypergraph {
        let a = VertexSet::range(0, a);
        Hypergraph::from_predicate(n, k, |e| e.intersection(a).len() % 2 == 1).unwrap()
    }

    #[test]
    fn complete_first_found() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let m = find_perfect_matching(&h).unwrap().unwrap();
        assert_eq!(m.edges(), &[set(&[0, 1, 2]), set(&[3, 4, 5])]);
        assert!(verify_matching(&h, &m, true).is_valid());
    }

    #[test]
    fn extremal_has_none() {
        assert_eq!(find_perfect_matching(&odd_construction(6, 3, 3)).unwrap(), None);
    }

    #[test]
    fn two_disjoint_edges() {
        let h = Hypergraph::new(6, 3, [set(&[0, 2, 4]), set(&[1, 3, 5])]).unwrap();
        let m = find_perfect_matching(&h).unwrap().unwrap();
        assert_eq!(m.edges(), &[set(&[0, 2, 4]), set(&[1, 3, 5])]);
    }

    #[test]
    fn indivisible_is_rejected() {
        let h = Hypergraph::complete(7, 3).unwrap();
        assert!(find_perfect_matching(&h).is_err());
    }

    #[test]
    fn budget_aborts() {
        let h = odd_construction(12, 3, 5);
        let (outcome, stats) = solve(&h, SolverConfig { node_limit: Some(3), ..Default::default() }).unwrap();
        assert_eq!(outcome, SolveOutcome::Aborted);
        assert_eq!(stats.nodes, 4);
        let (outcome, _) = solve(&h, SolverConfig::default()).unwrap();
        assert_eq!(outcome, SolveOutcome::Absent);
    }

    #[test]
    fn cache_agrees_with_plain_search() {
        for a in 1..12 {
            let h = odd_construction(12, 3, a);
            let plain = solve(&h, SolverConfig::default()).unwrap();
            let cached = solve(&h, SolverConfig { transposition_cache: true, ..Default::default() }).unwrap();
            assert_eq!(plain.0, cached.0);
            assert!(cached.1.nodes <= plain.1.nodes);
        }
    }

    #[test]
    fn solve_within_subset() {
        let h = Hypergraph::complete(9, 3).unwrap();
        let (out, _) = solve_within(&h, set(&[2, 4, 5, 7, 8, 1]), SolverConfig::default());
        let SolveOutcome::Found(m) = out else { panic!() };
        assert_eq!(m.covered(), set(&[1, 2, 4, 5, 7, 8]));
        let (out, _) = solve_within(&h, set(&[1, 2]), SolverConfig::default());
        assert_eq!(out, SolveOutcome::Absent);
    }

    #[test]
    fn greedy_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        for seed in 0..20 {
            assert_eq!(max_matching_greedy(&k6, seed).len(), 2);
        }
        assert!(max_matching_greedy(&Hypergraph::empty(6, 3).unwrap(), 1).is_empty());
        let pair = Hypergraph::new(4, 3, [set(&[0, 1, 2]), set(&[1, 2, 3])]).unwrap();
        for seed in 0..20 {
            assert_eq!(max_matching_greedy(&pair, seed).len(), 1);
        }
    }

    #[test]
    fn greedy_is_deterministic_and_maximal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = Hypergraph::random(12, 3, 0.1, &mut rng).unwrap();
        for seed in 0..30 {
            let m = max_matching_greedy(&h, seed);
            assert_eq!(m, max_matching_greedy(&h, seed));
            assert!(verify_matching(&h, &m, false).is_valid());
            let cover = m.covered();
            assert!(h.edges().iter().all(|e| !e.is_disjoint(cover)));
        }
    }

    #[test]
    fn verification_defects() {
        let h = Hypergraph::new(6, 3, [set(&[0, 1, 2]), set(&[2, 3, 4]), set(&[3, 4, 5])]).unwrap();
        let overlap = Matching::new(vec![set(&[0, 1, 2]), set(&[2, 3, 4])]);
        assert_eq!(verify_matching(&h, &overlap, false), Verdict::Invalid(Defect::Overlap));
        let non_edge = Matching::new(vec![set(&[0, 1, 5])]);
        assert_eq!(verify_matching(&h, &non_edge, false), Verdict::Invalid(Defect::NonEdge));
        let partial = Matching::new(vec![set(&[0, 1, 2])]);
        assert!(verify_matching(&h, &partial, false).is_valid());
        assert_eq!(verify_matching(&h, &partial, true), Verdict::Invalid(Defect::NotPerfect));
        let full = Matching::new(vec![set(&[0, 1, 2]), set(&[3, 4, 5])]);
        assert!(verify_matching(&h, &full, true).is_valid());
        assert_eq!(
            serde_json::to_string(&full.report(&h)).unwrap(),
            r#"{"perfect":true,"edges":[[0,1,2],[3,4,5]]}"#
        );
    }

    #[test]
    fn all_three_sets_of_six() {
        // sanity on the smallest nontrivial family: every pair of complementary triples
        let h = Hypergraph::complete(6, 3).unwrap();
        for e in subsets_of_range(6, 3) {
            let rest = h.vertices().difference(e);
            let sub = Hypergraph::new(6, 3, [e, rest]).unwrap();
            assert!(find_perfect_matching(&sub).unwrap().is_some());
        }
    }
}
