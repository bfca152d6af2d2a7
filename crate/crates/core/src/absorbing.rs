//! Absorbing sets, structured absorber enumeration and the three-phase
//! absorbing-method matching pipeline.
//!
//! A set `Q` of `k` vertices is split as `x ∪ y` with `|x| = r′` and
//! `|y| = r`, where `r = ⌈k/2⌉` and `r′ = k − r`. Two absorber shapes are
//! enumerated:
//!
//! * a single edge `x′ ∪ y′` (`|x′| = r`, `|y′| = r′`) with `x ∪ x′` and
//!   `y ∪ y′` also edges;
//! * a `2k`-set `x′ ∪ y′ ∪ w′ ∪ z′` (sizes `r, r′, r′, r`) with the five
//!   edges `x′w′`, `y′z′`, `w′z′`, `xx′` and `yy′`.
//!
//! Either way `H[S]` and `H[S ∪ Q]` have perfect matchings read off the
//! structure.

use crate::binom::small_binom;
use crate::error::{invalid, Result};
use crate::hypergraph::{neighborhood_index, Hypergraph};
use crate::matching::{greedy_from_edges, solve, solve_within, Matching, SolveOutcome, SolverConfig};
use crate::vset::{subsets, subsets_of_range, VertexSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::ops::ControlFlow;
use std::time::Instant;

/// Perfect matchings of `H[S]` and `H[S ∪ Q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorptionCertificate {
    pub q: VertexSet,
    pub s: VertexSet,
    pub pm_s: Matching,
    pub pm_sq: Matching,
}

/// Decides whether `S` absorbs `Q` using the exact solver.
pub fn is_absorbing(h: &Hypergraph, s: VertexSet, q: VertexSet) -> Result<Option<AbsorptionCertificate>> {
    let k = h.k();
    if !s.union(q).is_subset(h.vertices()) {
        return Err(invalid("absorber and target must lie inside the vertex set"));
    }
    if !s.is_disjoint(q) {
        return Err(invalid(format!("absorber {s:?} meets target {q:?}")));
    }
    if !s.len().is_multiple_of(k) || !q.len().is_multiple_of(k) {
        return Err(invalid(format!("|S| = {} and |Q| = {} must both be multiples of k = {k}", s.len(), q.len())));
    }
    let pm = |target| match solve_within(h, target, SolverConfig::default()).0 {
        SolveOutcome::Found(m) => Some(m),
        _ => None,
    };
    let Some(pm_s) = pm(s) else { return Ok(None) };
    let Some(pm_sq) = pm(s.union(q)) else { return Ok(None) };
    Ok(Some(AbsorptionCertificate { q, s, pm_s, pm_sq }))
}

/// `r = ⌈k/2⌉`.
pub fn r_of(k: usize) -> usize {
    k.div_ceil(2)
}

/// A labeling of `Q` as `x` (`r′` vertices) and `y` (`r` vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QSplit {
    pub x: VertexSet,
    pub y: VertexSet,
}

impl QSplit {
    /// `x` is given; `y = q − x`. Requires `|x| = k − ⌈k/2⌉`.
    pub fn new(q: VertexSet, x: VertexSet, k: usize) -> Result<Self> {
        if q.len() != k {
            return Err(invalid(format!("|Q| = {} but k = {k}", q.len())));
        }
        if !x.is_subset(q) || x.len() != k - r_of(k) {
            return Err(invalid(format!("{x:?} is not a {}-subset of {q:?}", k - r_of(k))));
        }
        Ok(QSplit { x, y: q.difference(x) })
    }

    /// The first `r′` vertices of `Q` form `x`.
    pub fn default_for(q: VertexSet, k: usize) -> Result<Self> {
        Self::new(q, q.first(k - r_of(k)), k)
    }

    /// Every split of `Q`, in lexicographic order of `x`.
    pub fn all(q: VertexSet, k: usize) -> Result<Vec<Self>> {
        subsets(q, k - r_of(k)).map(|x| Self::new(q, x, k)).collect()
    }

    pub fn q(&self) -> VertexSet {
        self.x.union(self.y)
    }
}

/// A single-edge absorber with its labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KAbsorber {
    pub x_prime: VertexSet,
    pub y_prime: VertexSet,
}

impl KAbsorber {
    pub fn set(&self) -> VertexSet {
        self.x_prime.union(self.y_prime)
    }

    pub fn certificate(&self, split: &QSplit) -> AbsorptionCertificate {
        AbsorptionCertificate {
            q: split.q(),
            s: self.set(),
            pm_s: Matching::new(vec![self.set()]),
            pm_sq: Matching::new(vec![split.x.union(self.x_prime), split.y.union(self.y_prime)]),
        }
    }
}

/// A `2k`-vertex absorber with its labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoKAbsorber {
    pub x_prime: VertexSet,
    pub y_prime: VertexSet,
    pub w_prime: VertexSet,
    pub z_prime: VertexSet,
}

impl TwoKAbsorber {
    pub fn set(&self) -> VertexSet {
        self.x_prime.union(self.y_prime).union(self.w_prime).union(self.z_prime)
    }

    /// `x′w′` and `y′z′`.
    pub fn inner_edges(&self) -> [VertexSet; 2] {
        [self.x_prime.union(self.w_prime), self.y_prime.union(self.z_prime)]
    }

    pub fn certificate(&self, split: &QSplit) -> AbsorptionCertificate {
        AbsorptionCertificate {
            q: split.q(),
            s: self.set(),
            pm_s: Matching::new(self.inner_edges().to_vec()),
            pm_sq: Matching::new(vec![
                split.x.union(self.x_prime),
                split.y.union(self.y_prime),
                self.w_prime.union(self.z_prime),
            ]),
        }
    }
}

/// Per-instance limit on candidate checks; `None` is unbounded.
struct Budget(Option<u64>);

impl Budget {
    fn spend(&mut self) -> bool {
        match &mut self.0 {
            None => true,
            Some(0) => false,
            Some(left) => {
                *left -= 1;
                true
            }
        }
    }
}

enum Walk {
    Done,
    Stopped,
    Truncated,
}

fn neighbors(index: &HashMap<VertexSet, Vec<VertexSet>>, s: VertexSet) -> &[VertexSet] {
    index.get(&s).map_or(&[], Vec::as_slice)
}

/// Neighborhood tables for `r`- and `r′`-sets, shared across targets.
pub struct AbsorberIndex<'h> {
    h: &'h Hypergraph,
    by_r: HashMap<VertexSet, Vec<VertexSet>>,
    by_r_prime: HashMap<VertexSet, Vec<VertexSet>>,
}

impl<'h> AbsorberIndex<'h> {
    pub fn new(h: &'h Hypergraph) -> Self {
        let r = r_of(h.k());
        AbsorberIndex { h, by_r: neighborhood_index(h, r), by_r_prime: neighborhood_index(h, h.k() - r) }
    }

    fn check_split(&self, split: &QSplit) -> Result<()> {
        let k = self.h.k();
        if split.q().len() != k || split.y.len() != r_of(k) || !split.q().is_subset(self.h.vertices()) {
            return Err(invalid(format!("{:?} is not a split of a {k}-set of the hypergraph", split)));
        }
        Ok(())
    }

    fn walk_k(
        &self,
        split: &QSplit,
        avoid: VertexSet,
        budget: &mut Budget,
        mut visit: impl FnMut(KAbsorber) -> ControlFlow<()>,
    ) -> Walk {
        for &xp in neighbors(&self.by_r_prime, split.x) {
            if !xp.is_disjoint(avoid) {
                continue;
            }
            for &yp in neighbors(&self.by_r, split.y) {
                if !yp.is_disjoint(avoid.union(xp)) {
                    continue;
                }
                if !budget.spend() {
                    return Walk::Truncated;
                }
                if self.h.is_edge(xp.union(yp)) && visit(KAbsorber { x_prime: xp, y_prime: yp }).is_break() {
                    return Walk::Stopped;
                }
            }
        }
        Walk::Done
    }

    fn walk_2k(
        &self,
        split: &QSplit,
        avoid: VertexSet,
        budget: &mut Budget,
        mut visit: impl FnMut(TwoKAbsorber) -> ControlFlow<()>,
    ) -> Walk {
        for &xp in neighbors(&self.by_r_prime, split.x) {
            if !xp.is_disjoint(avoid) {
                continue;
            }
            let used = avoid.union(xp);
            for &wp in neighbors(&self.by_r, xp) {
                if !wp.is_disjoint(used) {
                    continue;
                }
                let used = used.union(wp);
                for &yp in neighbors(&self.by_r, split.y) {
                    if !yp.is_disjoint(used) {
                        continue;
                    }
                    let used = used.union(yp);
                    for &zp in neighbors(&self.by_r_prime, wp) {
                        if !zp.is_disjoint(used) {
                            continue;
                        }
                        if !budget.spend() {
                            return Walk::Truncated;
                        }
                        let a = TwoKAbsorber { x_prime: xp, y_prime: yp, w_prime: wp, z_prime: zp };
                        if self.h.is_edge(yp.union(zp)) && visit(a).is_break() {
                            return Walk::Stopped;
                        }
                    }
                }
            }
        }
        Walk::Done
    }

    pub fn ksets(&self, split: &QSplit, budget: Option<u64>) -> Result<AbsorberList> {
        self.check_split(split)?;
        let mut acc = Accumulator::default();
        let walk = self.walk_k(split, split.q(), &mut Budget(budget), |a| {
            acc.add(a.set());
            ControlFlow::Continue(())
        });
        Ok(acc.finish(matches!(walk, Walk::Truncated)))
    }

    pub fn two_ksets(&self, split: &QSplit, budget: Option<u64>) -> Result<AbsorberList> {
        self.check_split(split)?;
        let mut acc = Accumulator::default();
        let walk = self.walk_2k(split, split.q(), &mut Budget(budget), |a| {
            acc.add(a.set());
            ControlFlow::Continue(())
        });
        Ok(acc.finish(matches!(walk, Walk::Truncated)))
    }
}

#[derive(Default)]
struct Accumulator {
    counts: HashMap<VertexSet, u64>,
    labeled: u64,
}

impl Accumulator {
    fn add(&mut self, s: VertexSet) {
        *self.counts.entry(s).or_default() += 1;
        self.labeled += 1;
    }

    fn finish(self, truncated: bool) -> AbsorberList {
        let max_multiplicity = self.counts.values().copied().max().unwrap_or(0);
        let mut sets: Vec<VertexSet> = self.counts.into_keys().collect();
        sets.sort_unstable();
        AbsorberList { sets, labeled_count: self.labeled, max_multiplicity, truncated }
    }
}

/// Distinct absorbers with labeled-structure bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorberList {
    pub sets: Vec<VertexSet>,
    /// Labeled structures found; each set may arise from several labelings.
    pub labeled_count: u64,
    /// Largest number of labelings producing one set.
    pub max_multiplicity: u64,
    pub truncated: bool,
}

/// Labelings that can produce one single-edge absorber: `binom(k, r)`.
pub fn k_absorber_multiplicity_bound(k: usize) -> u64 {
    small_binom(k, r_of(k))
}

/// Labelings that can produce one `2k` absorber:
/// `binom(2k, r) · binom(2k − r, r′) · binom(k, r)`.
pub fn two_k_absorber_multiplicity_bound(k: usize) -> u64 {
    let r = r_of(k);
    small_binom(2 * k, r) * small_binom(2 * k - r, k - r) * small_binom(k, r)
}

pub fn enumerate_absorbing_ksets(h: &Hypergraph, split: &QSplit, budget: Option<u64>) -> Result<AbsorberList> {
    AbsorberIndex::new(h).ksets(split, budget)
}

pub fn enumerate_absorbing_2ksets(h: &Hypergraph, split: &QSplit, budget: Option<u64>) -> Result<AbsorberList> {
    AbsorberIndex::new(h).two_ksets(split, budget)
}

/// Union of the structured absorbers of `Q` over all of its splits. The
/// budget applies per split and `max_multiplicity` is the per-split maximum.
pub fn enumerate_over_all_splits(
    h: &Hypergraph,
    q: VertexSet,
    two_k: bool,
    budget: Option<u64>,
) -> Result<AbsorberList> {
    let index = AbsorberIndex::new(h);
    let mut union = AbsorberList { sets: Vec::new(), labeled_count: 0, max_multiplicity: 0, truncated: false };
    for split in QSplit::all(q, h.k())? {
        let part = if two_k { index.two_ksets(&split, budget)? } else { index.ksets(&split, budget)? };
        union.sets.extend(part.sets);
        union.labeled_count += part.labeled_count;
        union.max_multiplicity = union.max_multiplicity.max(part.max_multiplicity);
        union.truncated |= part.truncated;
    }
    union.sets.sort_unstable();
    union.sets.dedup();
    Ok(union)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AbsorberShape {
    #[serde(rename = "k")]
    Single,
    #[serde(rename = "2k")]
    Double,
}

/// One absorber placed into the absorbing matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorberUse {
    pub target: VertexSet,
    pub split: QSplit,
    pub shape: AbsorberShape,
    pub absorber: VertexSet,
    pub certificate: AbsorptionCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorbingMatching {
    pub matching: Matching,
    /// `⌊ξn/k⌋`.
    pub cap: usize,
    pub targets_tried: usize,
    pub targets_without_absorber: usize,
    pub uses: Vec<AbsorberUse>,
    /// Some target's search hit the candidate budget.
    pub truncated: bool,
}

/// Targets drawn per run; exhaustive below this many `k`-sets.
const MAX_TARGETS: u64 = 20_000;

fn random_targets(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<VertexSet> {
    if small_binom(n, k) <= MAX_TARGETS {
        let mut all: Vec<VertexSet> = subsets_of_range(n, k).collect();
        all.shuffle(rng);
        all
    } else {
        (0..MAX_TARGETS)
            .map(|_| rand::seq::index::sample(rng, n, k).into_iter().collect())
            .collect()
    }
}

/// Greedy absorbing matching with at most `⌊ξn/k⌋` edges: random targets
/// `Q` avoiding the matching so far each contribute one structured absorber
/// disjoint from it, single-edge absorbers first.
pub fn build_absorbing_matching(
    h: &Hypergraph,
    xi: f64,
    seed: u64,
    candidate_budget: Option<u64>,
) -> Result<AbsorbingMatching> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(invalid(format!("ξ = {xi} must lie in (0, 1)")));
    }
    let (n, k) = (h.n(), h.k());
    let cap = (xi * n as f64 / k as f64).floor() as usize;
    let mut out = AbsorbingMatching {
        matching: Matching::default(),
        cap,
        targets_tried: 0,
        targets_without_absorber: 0,
        uses: Vec::new(),
        truncated: false,
    };
    if cap == 0 || h.edge_count() == 0 {
        return Ok(out);
    }
    let index = AbsorberIndex::new(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = VertexSet::EMPTY;
    let mut edges = Vec::new();
    for q in random_targets(n, k, &mut rng) {
        let room = cap - edges.len();
        if room == 0 {
            break;
        }
        if !q.is_disjoint(covered) {
            continue;
        }
        out.targets_tried += 1;
        let split = QSplit::default_for(q, k)?;
        let avoid = q.union(covered);
        let mut found_k = None;
        let walk = index.walk_k(&split, avoid, &mut Budget(candidate_budget), |a| {
            found_k = Some(a);
            ControlFlow::Break(())
        });
        out.truncated |= matches!(walk, Walk::Truncated);
        let placed = if let Some(a) = found_k {
            edges.push(a.set());
            Some((AbsorberShape::Single, a.set(), a.certificate(&split)))
        } else if room >= 2 {
            let mut found = None;
            let walk = index.walk_2k(&split, avoid, &mut Budget(candidate_budget), |a| {
                found = Some(a);
                ControlFlow::Break(())
            });
            out.truncated |= matches!(walk, Walk::Truncated);
            found.map(|a| {
                edges.extend(a.inner_edges());
                (AbsorberShape::Double, a.set(), a.certificate(&split))
            })
        } else {
            None
        };
        match placed {
            Some((shape, absorber, certificate)) => {
                covered = covered.union(absorber);
                out.uses.push(AbsorberUse { target: q, split, shape, absorber, certificate });
            }
            None => out.targets_without_absorber += 1,
        }
    }
    out.matching = Matching::new(edges);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PipelineParams {
    pub xi: f64,
    /// Recorded with the run; the structural diagnostics consume it.
    pub gamma: f64,
    pub seed: u64,
    pub fallback: bool,
    /// Node limit for each exact solve.
    pub node_limit: Option<u64>,
    /// Candidate checks per absorber search.
    pub candidate_budget: Option<u64>,
    #[serde(skip)]
    pub record_timings: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            xi: 0.1,
            gamma: 0.05,
            seed: 0,
            fallback: true,
            node_limit: None,
            candidate_budget: Some(100_000),
            record_timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStatus {
    Perfect,
    /// The exact solver proved that no perfect matching exists.
    NotPerfect,
    /// Neither found nor refuted within the limits.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseOutcome {
    Found,
    Absent,
    Aborted,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorbingPhase {
    pub size: usize,
    pub cap: usize,
    pub targets_tried: usize,
    pub targets_without_absorber: usize,
    pub k_absorbers: usize,
    pub two_k_absorbers: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyPhase {
    pub size: usize,
    /// `|W|`, the vertices left uncovered.
    pub leftover: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorptionPhase {
    pub leftover_divisible: bool,
    /// `|W| / k`.
    pub chunks: usize,
    pub outcome: PhaseOutcome,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FallbackPhase {
    pub outcome: PhaseOutcome,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseTimings {
    pub absorbing_ms: f64,
    pub greedy_ms: f64,
    pub absorption_ms: f64,
    pub fallback_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub status: PipelineStatus,
    pub params: PipelineParams,
    pub absorbing: AbsorbingPhase,
    pub greedy: GreedyPhase,
    pub absorption: AbsorptionPhase,
    pub fallback: Option<FallbackPhase>,
    pub matching: Option<Matching>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<PhaseTimings>,
}

fn outcome_of(o: &SolveOutcome) -> PhaseOutcome {
    match o {
        SolveOutcome::Found(_) => PhaseOutcome::Found,
        SolveOutcome::Absent => PhaseOutcome::Absent,
        SolveOutcome::Aborted => PhaseOutcome::Aborted,
    }
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Absorbing matching `M`, greedy matching `M′` on `V − V(M)`, then an
/// exact perfect matching of `H[V(M) ∪ W]` for the leftover `W`. With
/// `fallback`, a failed route is settled by the full exact solver.
pub fn pm_via_absorption(h: &Hypergraph, params: PipelineParams) -> Result<PipelineReport> {
    let (n, k) = (h.n(), h.k());
    if n % k != 0 {
        return Err(invalid(format!("k = {k} does not divide n = {n}")));
    }
    let solver = SolverConfig { node_limit: params.node_limit, transposition_cache: true };

    let t = Instant::now();
    let absorbing = build_absorbing_matching(h, params.xi, params.seed, params.candidate_budget)?;
    let absorbing_ms = ms_since(t);
    let m = &absorbing.matching;
    let count = |shape| absorbing.uses.iter().filter(|u| u.shape == shape).count();
    let absorbing_phase = AbsorbingPhase {
        size: m.len(),
        cap: absorbing.cap,
        targets_tried: absorbing.targets_tried,
        targets_without_absorber: absorbing.targets_without_absorber,
        k_absorbers: count(AbsorberShape::Single),
        two_k_absorbers: count(AbsorberShape::Double),
        truncated: absorbing.truncated,
    };

    let t = Instant::now();
    let rest = h.vertices().difference(m.covered());
    let rest_edges: Vec<VertexSet> = h.edges_within(rest).collect();
    let greedy = greedy_from_edges(&rest_edges, params.seed.wrapping_add(1));
    let w = rest.difference(greedy.covered());
    let greedy_ms = ms_since(t);

    let t = Instant::now();
    let (absorbed, stats) = solve_within(h, m.covered().union(w), solver);
    let absorption_ms = ms_since(t);
    let absorption = AbsorptionPhase {
        leftover_divisible: w.len().is_multiple_of(k),
        chunks: w.len() / k,
        outcome: outcome_of(&absorbed),
        nodes: stats.nodes,
    };

    let mut status = PipelineStatus::Unknown;
    let mut matching = None;
    let mut fallback = None;
    let mut fallback_ms = 0.0;
    if let SolveOutcome::Found(inner) = absorbed {
        status = PipelineStatus::Perfect;
        matching = Some(greedy.merged(&inner));
    } else if params.fallback {
        let t = Instant::now();
        let (outcome, stats) = solve(h, solver)?;
        fallback_ms = ms_since(t);
        fallback = Some(FallbackPhase { outcome: outcome_of(&outcome), nodes: stats.nodes });
        match outcome {
            SolveOutcome::Found(pm) => {
                status = PipelineStatus::Perfect;
                matching = Some(pm);
            }
            SolveOutcome::Absent => status = PipelineStatus::NotPerfect,
            SolveOutcome::Aborted => {}
        }
    }
    let timings = params.record_timings.then_some(PhaseTimings { absorbing_ms, greedy_ms, absorption_ms, fallback_ms });
    Ok(PipelineReport {
        status,
        params,
        absorbing: absorbing_phase,
        greedy: GreedyPhase { size: greedy.len(), leftover: w.len() },
        absorption,
        fallback,
        matching,
        timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{build, hext_family, ExtremalSpec, Kind};
    use crate::matching::verify_matching;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn absorption_examples() {
        let h = Hypergraph::complete(9, 3).unwrap();
        let c = is_absorbing(&h, set(&[3, 4, 5]), set(&[0, 1, 2])).unwrap().unwrap();
        assert!(verify_matching(&h, &c.pm_sq, false).is_valid());
        assert_eq!(c.pm_sq.covered(), set(&[0, 1, 2, 3, 4, 5]));
        let q = h.edges()[0];
        assert!(is_absorbing(&h, VertexSet::EMPTY, q).unwrap().is_some());
        let b = build(&ExtremalSpec::canonical(9, 3, 4, Kind::Odd).unwrap());
        // |S ∩ A| odd and |Q ∩ A| even: two odd parts cannot cover an odd total
        assert!(is_absorbing(&b, set(&[0, 4, 5]), set(&[2, 3, 6])).unwrap().is_none());
    }

    #[test]
    fn absorption_input_checks() {
        let h = Hypergraph::complete(9, 3).unwrap();
        assert!(is_absorbing(&h, set(&[0, 1, 2]), set(&[2, 3, 4])).is_err());
        assert!(is_absorbing(&h, set(&[0, 1]), set(&[2, 3, 4])).is_err());
        assert!(is_absorbing(&h, set(&[0, 1, 2]), set(&[3, 4, 9])).is_err());
    }

    #[test]
    fn splits() {
        let q = set(&[2, 5, 7]);
        let s = QSplit::default_for(q, 3).unwrap();
        assert_eq!((s.x, s.y), (set(&[2]), set(&[5, 7])));
        assert_eq!(QSplit::all(q, 3).unwrap().len(), 3);
        assert_eq!(QSplit::all(set(&[0, 1, 2, 3]), 4).unwrap().len(), 6);
        assert!(QSplit::new(q, set(&[2, 5]), 3).is_err());
    }

    #[test]
    fn complete_hypergraph_counts() {
        for k in 2..=4 {
            let h = Hypergraph::complete(3 * k, k).unwrap();
            let split = QSplit::default_for(VertexSet::range(0, k), k).unwrap();
            let list = enumerate_absorbing_ksets(&h, &split, None).unwrap();
            assert_eq!(list.sets.len() as u64, small_binom(2 * k, k));
            assert_eq!(list.labeled_count, list.sets.len() as u64 * k_absorber_multiplicity_bound(k));
        }
        let h = Hypergraph::complete(12, 3).unwrap();
        let split = QSplit::default_for(set(&[0, 1, 2]), 3).unwrap();
        let list = enumerate_absorbing_2ksets(&h, &split, None).unwrap();
        assert_eq!(list.sets.len(), 84);
        assert_eq!(list.labeled_count, 15120);
        assert_eq!(list.max_multiplicity, two_k_absorber_multiplicity_bound(3));
        assert!(!list.truncated);
    }

    #[test]
    fn degenerate_enumerations() {
        let q = set(&[0, 1, 2]);
        let only_q = Hypergraph::new(9, 3, [q]).unwrap();
        let split = QSplit::default_for(q, 3).unwrap();
        assert!(enumerate_absorbing_ksets(&only_q, &split, None).unwrap().sets.is_empty());
        let empty = Hypergraph::empty(12, 3).unwrap();
        assert!(enumerate_absorbing_2ksets(&empty, &split, None).unwrap().sets.is_empty());
        let bad = QSplit { x: set(&[0]), y: set(&[1]) };
        assert!(enumerate_absorbing_ksets(&only_q, &bad, None).is_err());
    }

    #[test]
    fn budget_truncates() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let split = QSplit::default_for(set(&[0, 1, 2]), 3).unwrap();
        let list = enumerate_absorbing_2ksets(&h, &split, Some(100)).unwrap();
        assert!(list.truncated);
        assert_eq!(list.labeled_count, 100);
    }

    #[test]
    fn structured_absorbers_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let h = Hypergraph::random(12, 3, 0.5, &mut rng).unwrap();
            let q: VertexSet = rand::seq::index::sample(&mut rng, 12, 3).into_iter().collect();
            let index = AbsorberIndex::new(&h);
            for split in QSplit::all(q, 3).unwrap() {
                index.walk_k(&split, q, &mut Budget(None), |a| {
                    let c = a.certificate(&split);
                    assert!(verify_matching(&h, &c.pm_s, false).is_valid());
                    assert!(verify_matching(&h, &c.pm_sq, false).is_valid());
                    assert!(is_absorbing(&h, a.set(), q).unwrap().is_some(), "trial {trial}");
                    ControlFlow::Continue(())
                });
                index.walk_2k(&split, q, &mut Budget(Some(2000)), |a| {
                    let c = a.certificate(&split);
                    assert_eq!(c.pm_sq.covered(), a.set().union(q));
                    assert!(verify_matching(&h, &c.pm_sq, false).is_valid());
                    assert!(verify_matching(&h, &c.pm_s, false).is_valid());
                    ControlFlow::Continue(())
                });
            }
        }
    }

    #[test]
    fn absorbing_matching_examples() {
        let h = Hypergraph::complete(9, 3).unwrap();
        let m = build_absorbing_matching(&h, 3.0 / 9.0 + 1e-9, 1, None).unwrap();
        assert_eq!(m.matching.len(), 1);
        let empty = Hypergraph::empty(9, 3).unwrap();
        assert!(build_absorbing_matching(&empty, 0.5, 1, None).unwrap().matching.is_empty());
        assert!(build_absorbing_matching(&h, 1.0, 1, None).is_err());
        assert!(build_absorbing_matching(&h, 0.0, 1, None).is_err());
    }

    #[test]
    fn dense_random_absorbers_self_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let h = Hypergraph::random(15, 3, 0.6, &mut rng).unwrap();
        let m = build_absorbing_matching(&h, 0.2, 11, None).unwrap();
        assert!(!m.matching.is_empty());
        assert!(verify_matching(&h, &m.matching, false).is_valid());
        for u in &m.uses {
            assert!(is_absorbing(&h, u.absorber, u.target).unwrap().is_some());
        }
        let again = build_absorbing_matching(&h, 0.2, 11, None).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn pipeline_on_complete_and_extremal() {
        let h = Hypergraph::complete(12, 3).unwrap();
        let report = pm_via_absorption(&h, PipelineParams::default()).unwrap();
        assert_eq!(report.status, PipelineStatus::Perfect);
        assert_eq!(report.greedy.leftover, 0);
        assert!(verify_matching(&h, report.matching.as_ref().unwrap(), true).is_valid());
        for spec in hext_family(12, 3).unwrap() {
            let report = pm_via_absorption(&build(&spec), PipelineParams::default()).unwrap();
            assert_eq!(report.status, PipelineStatus::NotPerfect, "{spec}");
            assert_eq!(report.fallback.as_ref().unwrap().outcome, PhaseOutcome::Absent);
        }
        assert!(pm_via_absorption(&Hypergraph::complete(10, 3).unwrap(), PipelineParams::default()).is_err());
    }

    #[test]
    fn pipeline_without_fallback_stays_unknown() {
        let spec = ExtremalSpec::canonical(12, 3, 3, Kind::Even).unwrap();
        let params = PipelineParams { fallback: false, ..PipelineParams::default() };
        let report = pm_via_absorption(&build(&spec), params).unwrap();
        assert_eq!(report.status, PipelineStatus::Unknown);
        assert!(report.fallback.is_none());
    }

    #[test]
    fn pipeline_json_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = Hypergraph::random(15, 3, 0.6, &mut rng).unwrap();
        let params = PipelineParams { xi: 0.4, seed: 9, ..PipelineParams::default() };
        let a = serde_json::to_string(&pm_via_absorption(&h, params).unwrap()).unwrap();
        let b = serde_json::to_string(&pm_via_absorption(&h, params).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
        let timed = PipelineParams { record_timings: true, ..params };
        assert!(pm_via_absorption(&h, timed).unwrap().timings.is_some());
    }
}
