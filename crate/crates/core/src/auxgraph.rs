//! The auxiliary bipartite graph `G(H)` and the structural diagnostics
//! built on it.
//!
//! Left vertices are the `r`-subsets of `[0, n)`, right vertices the
//! `r′`-subsets (`r = ⌈k/2⌉`, `r′ = k − r`), and `P ~ P′` when they are
//! disjoint with `P ∪ P′ ∈ E(H)`. The model graph is the union of the
//! complete bipartite graphs `X₁ × Y₁` and `X₂ × Y₂` under a coloring of
//! both sides, restricted to disjoint pairs.
//!
//! `G(H)` is never materialized except through [`AuxGraph::explicit_edges`]
//! for `n <= 12`; everything else is computed by walking `k`-sets and
//! their `binom(k, r)` splits.

use crate::absorbing::r_of;
use crate::binom::small_binom;
use crate::error::{invalid, BlockingCase, Error, Result};
use crate::extremal::{ExtremalSpec, Kind};
use crate::hypergraph::{neighborhood_index, Hypergraph};
use crate::vset::{subsets, subsets_of_range, VertexSet};
use serde::Serialize;
use std::collections::HashMap;

const EXPLICIT_MAX_N: usize = 12;

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(invalid("the auxiliary graph needs k >= 2"));
    }
    Ok(())
}

pub struct AuxGraph<'h> {
    host: &'h Hypergraph,
    r: usize,
    r_prime: usize,
}

impl<'h> AuxGraph<'h> {
    pub fn new(host: &'h Hypergraph) -> Result<Self> {
        check_k(host.k())?;
        let r = r_of(host.k());
        Ok(AuxGraph { host, r, r_prime: host.k() - r })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn r_prime(&self) -> usize {
        self.r_prime
    }

    /// `N = binom(n, r)`.
    pub fn left_size(&self) -> u64 {
        small_binom(self.host.n(), self.r)
    }

    /// `N′ = binom(n, r′)`.
    pub fn right_size(&self) -> u64 {
        small_binom(self.host.n(), self.r_prime)
    }

    pub fn adjacent(&self, p: VertexSet, p_prime: VertexSet) -> Result<bool> {
        if p.len() != self.r || p_prime.len() != self.r_prime {
            return Err(invalid(format!(
                "expected an {}-set and an {}-set, got sizes {} and {}",
                self.r,
                self.r_prime,
                p.len(),
                p_prime.len()
            )));
        }
        Ok(p.is_disjoint(p_prime) && self.host.is_edge(p.union(p_prime)))
    }

    pub fn edge_count(&self) -> u64 {
        self.host.edges().iter().map(|&e| subsets(e, self.r).count() as u64).sum()
    }

    /// All adjacent pairs, ordered by hyperedge then by `P`.
    pub fn explicit_edges(&self) -> Result<Vec<(VertexSet, VertexSet)>> {
        if self.host.n() > EXPLICIT_MAX_N {
            return Err(invalid(format!("explicit auxiliary edges are limited to n <= {EXPLICIT_MAX_N}")));
        }
        Ok(self
            .host
            .edges()
            .iter()
            .flat_map(|&e| subsets(e, self.r).map(move |p| (p, e.difference(p))))
            .collect())
    }
}

pub fn aux_adjacent(h: &Hypergraph, p: VertexSet, p_prime: VertexSet) -> Result<bool> {
    AuxGraph::new(h)?.adjacent(p, p_prime)
}

pub fn aux_edge_count(h: &Hypergraph) -> Result<u64> {
    Ok(AuxGraph::new(h)?.edge_count())
}

/// A two-coloring of the `r`-sets (`φ`) and of the `r′`-sets (`ψ`).
/// `true` means `X₁` (respectively `Y₁`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionColoring {
    n: usize,
    k: usize,
    phi: Vec<bool>,
    psi: Vec<bool>,
}

impl PartitionColoring {
    pub fn from_fn(
        n: usize,
        k: usize,
        mut phi: impl FnMut(VertexSet) -> bool,
        mut psi: impl FnMut(VertexSet) -> bool,
    ) -> Result<Self> {
        check_k(k)?;
        if n > 64 || k > n {
            return Err(invalid(format!("need k <= n <= 64, got n = {n}, k = {k}")));
        }
        let r = r_of(k);
        // subsets come out in lexicographic order, so place them by colex rank
        let mut phi_bits = vec![false; small_binom(n, r) as usize];
        for p in subsets_of_range(n, r) {
            phi_bits[p.colex_rank()] = phi(p);
        }
        let mut psi_bits = vec![false; small_binom(n, k - r) as usize];
        for q in subsets_of_range(n, k - r) {
            psi_bits[q.colex_rank()] = psi(q);
        }
        Ok(PartitionColoring { n, k, phi: phi_bits, psi: psi_bits })
    }

    /// `φ(P) = X₁` iff `|P ∩ A|` is odd; `ψ(P′) = Y₁` iff `|P′ ∩ A|` is even.
    pub fn parity(n: usize, k: usize, a: VertexSet) -> Result<Self> {
        if !a.is_subset(VertexSet::range(0, n.min(64))) {
            return Err(invalid(format!("{a:?} is not a subset of [0, {n})")));
        }
        Self::from_fn(n, k, |p| p.intersection(a).len() % 2 == 1, |q| q.intersection(a).len() % 2 == 0)
    }

    /// The parity coloring whose model is exactly `build(spec)`. The even
    /// construction pairs `X₁` with `Y₂`, so its `ψ` is complemented.
    pub fn for_spec(spec: &ExtremalSpec) -> Result<Self> {
        let a = spec.bipartition.a();
        let odd = spec.kind == Kind::Odd;
        Self::from_fn(spec.n(), spec.k, |p| p.intersection(a).len() % 2 == 1, |q| {
            (q.intersection(a).len() % 2 == 0) == odd
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        r_of(self.k)
    }

    pub fn r_prime(&self) -> usize {
        self.k - r_of(self.k)
    }

    pub fn in_x1(&self, p: VertexSet) -> bool {
        debug_assert_eq!(p.len(), self.r());
        self.phi[p.colex_rank()]
    }

    pub fn in_y1(&self, q: VertexSet) -> bool {
        debug_assert_eq!(q.len(), self.r_prime());
        self.psi[q.colex_rank()]
    }

    pub fn flip_x(&mut self, p: VertexSet) {
        let i = p.colex_rank();
        self.phi[i] = !self.phi[i];
    }

    pub fn flip_y(&mut self, q: VertexSet) {
        let i = q.colex_rank();
        self.psi[i] = !self.psi[i];
    }

    pub fn x1_size(&self) -> usize {
        self.phi.iter().filter(|&&b| b).count()
    }

    pub fn y1_size(&self) -> usize {
        self.psi.iter().filter(|&&b| b).count()
    }

    /// Adjacency in the model graph `X₁×Y₁ ∪ X₂×Y₂` over disjoint pairs.
    pub fn model_adjacent(&self, p: VertexSet, q: VertexSet) -> bool {
        p.is_disjoint(q) && self.in_x1(p) == self.in_y1(q)
    }
}

fn check_match(h: &Hypergraph, c: &PartitionColoring) -> Result<()> {
    if h.n() != c.n || h.k() != c.k {
        return Err(invalid(format!("coloring is for ({}, {}) but H is ({}, {})", c.n, c.k, h.n(), h.k())));
    }
    Ok(())
}

/// `|E(G(H)) △ E(model)|`.
pub fn edit_distance_model(h: &Hypergraph, coloring: &PartitionColoring) -> Result<u64> {
    check_match(h, coloring)?;
    let r = coloring.r();
    let mut distance = 0;
    for s in subsets_of_range(h.n(), h.k()) {
        let in_g = h.is_edge(s);
        distance += subsets(s, r).filter(|&p| (coloring.in_x1(p) == coloring.in_y1(s.difference(p))) != in_g).count() as u64;
    }
    Ok(distance)
}

/// `k`-sets with one split inside the model and another outside it.
pub fn bad_kset_count(coloring: &PartitionColoring) -> u64 {
    let r = coloring.r();
    subsets_of_range(coloring.n, coloring.k)
        .filter(|&s| {
            let mut seen = [false; 2];
            for p in subsets(s, r) {
                seen[usize::from(coloring.in_x1(p) == coloring.in_y1(s.difference(p)))] = true;
            }
            seen[0] && seen[1]
        })
        .count() as u64
}

/// `G`-edge counts between color classes: `e[i][j]` counts edges from
/// `X_{i+1}` to `Y_{j+1}`.
pub fn class_edge_counts(h: &Hypergraph, coloring: &PartitionColoring) -> Result<[[u64; 2]; 2]> {
    check_match(h, coloring)?;
    let mut e = [[0u64; 2]; 2];
    for &edge in h.edges() {
        for p in subsets(edge, coloring.r()) {
            let i = usize::from(!coloring.in_x1(p));
            let j = usize::from(!coloring.in_y1(edge.difference(p)));
            e[i][j] += 1;
        }
    }
    Ok(e)
}

/// Sorted `r′`-set neighborhoods of every `r`-set with positive degree.
fn r_neighborhoods(h: &Hypergraph) -> HashMap<VertexSet, Vec<VertexSet>> {
    let mut index = neighborhood_index(h, r_of(h.k()));
    for list in index.values_mut() {
        list.sort_unstable();
    }
    index
}

fn sorted_intersection_len(a: &[VertexSet], b: &[VertexSet]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("γ = {gamma} must lie in (0, 1)")));
    }
    Ok(())
}

fn good_counts(h: &Hypergraph, nbrs: &HashMap<VertexSet, Vec<VertexSet>>, b: VertexSet, gamma: f64) -> u64 {
    let need = gamma * small_binom(h.n(), h.k() - r_of(h.k())) as f64;
    let empty = Vec::new();
    let nb = nbrs.get(&b).unwrap_or(&empty);
    subsets_of_range(h.n(), r_of(h.k()))
        .filter(|a| {
            let na = nbrs.get(a).unwrap_or(&empty);
            sorted_intersection_len(na, nb) as f64 >= need
        })
        .count() as u64
}

/// Number of `r`-sets `a` with `|N(a) ∩ N(b)| >= γ·binom(n, r′)`.
pub fn good_rtuple_count(h: &Hypergraph, b: VertexSet, gamma: f64) -> Result<u64> {
    check_k(h.k())?;
    check_gamma(gamma)?;
    if b.len() != r_of(h.k()) || !b.is_subset(h.vertices()) {
        return Err(invalid(format!("{b:?} is not an {}-subset of the vertex set", r_of(h.k()))));
    }
    Ok(good_counts(h, &r_neighborhoods(h), b, gamma))
}

/// Raw quantities behind the two absorbing cases.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub case_a: bool,
    pub case_b: bool,
    /// Fewest good partners over all `r`-sets.
    pub min_good_partners: u64,
    /// `(1/2 + γ)·binom(n, r)`.
    pub good_partner_threshold: f64,
    /// First `r`-set whose good-partner count falls below the threshold.
    pub witness: Option<VertexSet>,
    /// `|Λ|`: `r′`-sets of degree at least `(1/2 + γ)·binom(n, r)`.
    pub lambda_size: u64,
    /// `2γ·binom(n, r′)`.
    pub lambda_threshold: f64,
}

pub fn cases(h: &Hypergraph, gamma: f64) -> Result<CaseReport> {
    check_k(h.k())?;
    check_gamma(gamma)?;
    let (n, k) = (h.n(), h.k());
    let (r, rp) = (r_of(k), k - r_of(k));
    let big_n = small_binom(n, r) as f64;
    let nbrs = r_neighborhoods(h);
    let good_partner_threshold = (0.5 + gamma) * big_n;
    let mut min_good_partners = u64::MAX;
    let mut witness = None;
    for b in subsets_of_range(n, r) {
        let count = good_counts(h, &nbrs, b, gamma);
        min_good_partners = min_good_partners.min(count);
        if witness.is_none() && (count as f64) < good_partner_threshold {
            witness = Some(b);
        }
    }
    let degrees = h.degree_table(rp);
    let lambda_size = subsets_of_range(n, rp)
        .filter(|s| degrees.get(s).copied().unwrap_or(0) as f64 >= good_partner_threshold)
        .count() as u64;
    let lambda_threshold = 2.0 * gamma * small_binom(n, rp) as f64;
    Ok(CaseReport {
        case_a: witness.is_none(),
        case_b: lambda_size as f64 >= lambda_threshold,
        min_good_partners,
        good_partner_threshold,
        witness,
        lambda_size,
        lambda_threshold,
    })
}

pub fn case_a(h: &Hypergraph, gamma: f64) -> Result<bool> {
    Ok(cases(h, gamma)?.case_a)
}

pub fn case_b(h: &Hypergraph, gamma: f64) -> Result<bool> {
    Ok(cases(h, gamma)?.case_b)
}

/// Edge counts `e(X′,Y′)`, `e(X″,Y″)`, `e(X′,Y″)`, `e(X″,Y′)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockEdges {
    pub primary: u64,
    pub secondary: u64,
    pub cross_primary_secondary: u64,
    pub cross_secondary_primary: u64,
}

impl From<[[u64; 2]; 2]> for BlockEdges {
    fn from(e: [[u64; 2]; 2]) -> Self {
        BlockEdges {
            primary: e[0][0],
            secondary: e[1][1],
            cross_primary_secondary: e[0][1],
            cross_secondary_primary: e[1][0],
        }
    }
}

/// Output of the partition derivation. Colorings put `A′`/`X′` on the
/// `X₁` side and `B′`/`Y′` on the `Y₁` side.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionDerivation {
    /// The `r`-set `ā` violating the good-partner condition.
    pub witness: VertexSet,
    pub a_prime: Vec<VertexSet>,
    pub a_double_prime: Vec<VertexSet>,
    pub b_prime: Vec<VertexSet>,
    pub b_double_prime: Vec<VertexSet>,
    /// `(A′, B′)` as a coloring.
    pub raw: PartitionColoring,
    /// `|X′| = ⌈N/2⌉` maximizing `|X′ ∩ A′|`, likewise `Y′` from `B′`.
    pub balanced: PartitionColoring,
    /// Majority-vote coloring: an `r′`-set is in `Y₁` when most of its
    /// `G`-neighbors lie in `A′`, and an `r`-set is in `X₁` when most of its
    /// neighbors lie in that `Y₁`.
    pub refined: PartitionColoring,
    /// Block edge counts for the balanced coloring.
    pub blocks: BlockEdges,
}

fn balanced_completion(n: usize, size: usize, preferred: impl Fn(VertexSet) -> bool) -> Vec<bool> {
    let all: Vec<VertexSet> = subsets_of_range(n, size).collect();
    let target = all.len().div_ceil(2);
    let mut chosen = vec![false; all.len()];
    let mut taken = 0;
    for pass_preferred in [true, false] {
        for s in &all {
            if taken == target {
                break;
            }
            let i = s.colex_rank();
            if !chosen[i] && preferred(*s) == pass_preferred {
                chosen[i] = true;
                taken += 1;
            }
        }
    }
    chosen
}

/// Derives a candidate model coloring when neither absorbing case holds.
pub fn derive_partition(h: &Hypergraph, gamma: f64) -> Result<PartitionDerivation> {
    let report = cases(h, gamma)?;
    if report.case_a {
        return Err(Error::CaseHolds(BlockingCase::CaseA));
    }
    if report.case_b {
        return Err(Error::CaseHolds(BlockingCase::CaseB));
    }
    let (n, k) = (h.n(), h.k());
    let (r, rp) = (r_of(k), k - r_of(k));
    let witness = report.witness.expect("case (a) fails only with a witness");
    let nbrs = r_neighborhoods(h);
    let empty = Vec::new();
    let b_prime_list = nbrs.get(&witness).unwrap_or(&empty).clone();
    let need = gamma * small_binom(n, rp) as f64;
    let in_a_double = |x: VertexSet| (sorted_intersection_len(nbrs.get(&x).unwrap_or(&empty), &b_prime_list) as f64) < need;

    let (mut a_prime, mut a_double_prime) = (Vec::new(), Vec::new());
    for x in subsets_of_range(n, r) {
        if in_a_double(x) {
            a_double_prime.push(x);
        } else {
            a_prime.push(x);
        }
    }
    let b_double_prime: Vec<VertexSet> =
        subsets_of_range(n, rp).filter(|q| b_prime_list.binary_search(q).is_err()).collect();

    let in_a_prime = |x: VertexSet| !in_a_double(x);
    let in_b_prime = |q: VertexSet| b_prime_list.binary_search(&q).is_ok();
    let raw = PartitionColoring::from_fn(n, k, in_a_prime, in_b_prime)?;

    let x_bits = balanced_completion(n, r, in_a_prime);
    let y_bits = balanced_completion(n, rp, in_b_prime);
    let balanced = PartitionColoring::from_fn(n, k, |p| x_bits[p.colex_rank()], |q| y_bits[q.colex_rank()])?;

    // ψ by majority vote of each r′-set's neighbors against A′, then φ by
    // majority vote against that ψ
    let right_nbrs = neighborhood_index(h, rp);
    let psi_bits: Vec<bool> = {
        let mut bits = vec![false; small_binom(n, rp) as usize];
        for q in subsets_of_range(n, rp) {
            let list = right_nbrs.get(&q).unwrap_or(&empty);
            bits[q.colex_rank()] = 2 * list.iter().filter(|&&p| raw.in_x1(p)).count() > list.len();
        }
        bits
    };
    let refined = PartitionColoring::from_fn(
        n,
        k,
        |p| {
            let list = nbrs.get(&p).unwrap_or(&empty);
            2 * list.iter().filter(|q| psi_bits[q.colex_rank()]).count() > list.len()
        },
        |q| psi_bits[q.colex_rank()],
    )?;

    let blocks = class_edge_counts(h, &balanced)?.into();
    Ok(PartitionDerivation {
        witness,
        a_prime,
        a_double_prime,
        b_prime: b_prime_list,
        b_double_prime,
        raw,
        balanced,
        refined,
        blocks,
    })
}

/// `C`, `D` over `(r+1)`-sets and `C′`, `D′` over `(r′+1)`-sets through `u, v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CdCounts {
    pub c: u64,
    pub d: u64,
    pub c_prime: u64,
    pub d_prime: u64,
}

fn cd_side(n: usize, size: usize, u: usize, v: usize, color: impl Fn(VertexSet) -> bool) -> (u64, u64) {
    if size == 0 {
        return (0, 0);
    }
    let rest = VertexSet::range(0, n).without(u).without(v);
    let (mut same, mut diff) = (0, 0);
    for t in subsets(rest, size - 1) {
        if color(t.with(v)) == color(t.with(u)) {
            same += 1;
        } else {
            diff += 1;
        }
    }
    (same, diff)
}

pub fn cd_counts(coloring: &PartitionColoring, u: usize, v: usize) -> Result<CdCounts> {
    let n = coloring.n;
    if u == v || u >= n || v >= n {
        return Err(invalid(format!("need two distinct vertices of [0, {n}), got {u} and {v}")));
    }
    // S − u = T + v and S − v = T + u for S = T ∪ {u, v}
    let (c, d) = cd_side(n, coloring.r(), u, v, |p| coloring.in_x1(p));
    let (c_prime, d_prime) = cd_side(n, coloring.r_prime(), u, v, |q| coloring.in_y1(q));
    Ok(CdCounts { c, d, c_prime, d_prime })
}

/// Color statistics of the sets meeting `V₂` in exactly `i` vertices and
/// `V₁` in the rest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub i: usize,
    pub total: u64,
    pub in_class_1: u64,
    /// Share of the majority class, or 1 for an empty profile.
    pub majority_fraction: f64,
    /// 1 or 2.
    pub majority_class: u8,
}

fn profile_rows(v1: VertexSet, v2: VertexSet, size: usize, color: impl Fn(VertexSet) -> bool) -> Vec<ProfileRow> {
    (0..=size)
        .map(|i| {
            let (mut total, mut in_class_1) = (0u64, 0u64);
            for low in subsets(v1, size - i) {
                for high in subsets(v2, i) {
                    total += 1;
                    in_class_1 += u64::from(color(low.union(high)));
                }
            }
            let majority = in_class_1.max(total - in_class_1);
            ProfileRow {
                i,
                total,
                in_class_1,
                majority_fraction: if total == 0 { 1.0 } else { majority as f64 / total as f64 },
                majority_class: if 2 * in_class_1 >= total { 1 } else { 2 },
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profiles {
    pub r_sets: Vec<ProfileRow>,
    pub r_prime_sets: Vec<ProfileRow>,
}

/// Vertex classification derived from a coloring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairClassification {
    pub v0: usize,
    #[serde(rename = "V0")]
    pub v_0: VertexSet,
    #[serde(rename = "V1")]
    pub v_1: VertexSet,
    #[serde(rename = "V2")]
    pub v_2: VertexSet,
    pub consistent_pairs: u64,
    pub similar_pairs: u64,
    /// `β₁·n^{r−1}` and `β₁·n^{r′−1}`.
    pub thresholds: [f64; 2],
    pub degenerate: bool,
    pub profiles: Profiles,
    pub flags: Vec<String>,
}

/// Labels pairs consistent and similar, picks `v₀`, and splits the vertices
/// into `V₀, V₁, V₂`.
///
/// `v₀` is taken to be consistent and similar to itself with
/// `D(v₀, v₀) = 0`, so it lands in `V₁`.
pub fn classify_pairs(coloring: &PartitionColoring, beta1: f64) -> Result<PairClassification> {
    if !(beta1 > 0.0 && beta1 < 1.0) {
        return Err(invalid(format!("β₁ = {beta1} must lie in (0, 1)")));
    }
    let n = coloring.n;
    let (r, rp) = (coloring.r(), coloring.r_prime());
    let t = beta1 * (n as f64).powi(r as i32 - 1);
    let t_prime = beta1 * (n as f64).powi(rp as i32 - 1);
    let degenerate = small_binom(n - 2, r - 1) as f64 <= 2.0 * t || small_binom(n - 2, rp - 1) as f64 <= 2.0 * t_prime;

    let mut cd = vec![vec![CdCounts { c: 0, d: 0, c_prime: 0, d_prime: 0 }; n]; n];
    let mut good = vec![vec![false; n]; n];
    let (mut consistent_pairs, mut similar_pairs) = (0, 0);
    for u in 0..n {
        for v in u + 1..n {
            let x = cd_counts(coloring, u, v)?;
            let small_c = x.c as f64 <= t;
            let small_d = x.d as f64 <= t;
            let consistent = small_c == (x.c_prime as f64 <= t_prime) && small_d == (x.d_prime as f64 <= t_prime);
            let similar = small_c || small_d;
            consistent_pairs += u64::from(consistent);
            similar_pairs += u64::from(similar);
            cd[u][v] = x;
            cd[v][u] = x;
            good[u][v] = consistent && similar;
            good[v][u] = consistent && similar;
        }
    }
    let score = |v: usize| good[v].iter().filter(|&&g| g).count();
    let v0 = (0..n).max_by_key(|&v| (score(v), std::cmp::Reverse(v))).unwrap_or(0);

    let mut flags = Vec::new();
    if degenerate {
        flags.push("degenerate-threshold".to_string());
    }
    let (mut v_0, mut v_1, mut v_2) = (VertexSet::EMPTY, VertexSet::singleton(v0), VertexSet::EMPTY);
    for v in (0..n).filter(|&v| v != v0) {
        if !good[v][v0] {
            v_0 = v_0.with(v);
            continue;
        }
        let x = cd[v][v0];
        match (x.d as f64 <= t, x.c as f64 <= t) {
            (true, true) => {
                flags.push(format!("vertex {v} qualifies for both V1 and V2; placed in V1"));
                v_1 = v_1.with(v);
            }
            (true, false) => v_1 = v_1.with(v),
            (false, true) => v_2 = v_2.with(v),
            (false, false) => unreachable!("similar pairs have a small C or D"),
        }
    }
    let profiles = Profiles {
        r_sets: profile_rows(v_1, v_2, r, |p| coloring.in_x1(p)),
        r_prime_sets: profile_rows(v_1, v_2, rp, |q| coloring.in_y1(q)),
    };
    Ok(PairClassification {
        v0,
        v_0,
        v_1,
        v_2,
        consistent_pairs,
        similar_pairs,
        thresholds: [t, t_prime],
        degenerate,
        profiles,
        flags,
    })
}

/// Which coloring feeds the structure report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColoringChoice {
    Raw,
    Balanced,
    Refined,
}

/// Structural summary of `H` against the two-block model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    #[serde(rename = "V0")]
    pub v_0: VertexSet,
    #[serde(rename = "V1")]
    pub v_1: VertexSet,
    #[serde(rename = "V2")]
    pub v_2: VertexSet,
    #[serde(rename = "badKSets")]
    pub bad_ksets: Option<u64>,
    #[serde(rename = "editDistance")]
    pub edit_distance: Option<u64>,
    #[serde(rename = "caseA")]
    pub case_a: bool,
    #[serde(rename = "caseB")]
    pub case_b: bool,
    pub flags: Vec<String>,
    pub cases: CaseReport,
    pub coloring: Option<ColoringChoice>,
    #[serde(rename = "editDistances")]
    pub edit_distances: Option<EditDistances>,
    pub blocks: Option<BlockEdges>,
    pub classification: Option<PairClassification>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EditDistances {
    pub raw: u64,
    pub balanced: u64,
    pub refined: u64,
}

/// Cases, partition derivation and pair classification in one pass. When
/// an absorbing case holds there is no derived partition; every vertex is
/// then reported in `V₀`.
pub fn structure_report(h: &Hypergraph, gamma: f64, beta1: f64, choice: ColoringChoice) -> Result<StructureReport> {
    let cases = cases(h, gamma)?;
    let derivation = match derive_partition(h, gamma) {
        Ok(d) => d,
        Err(Error::CaseHolds(which)) => {
            return Ok(StructureReport {
                v_0: h.vertices(),
                v_1: VertexSet::EMPTY,
                v_2: VertexSet::EMPTY,
                bad_ksets: None,
                edit_distance: None,
                case_a: cases.case_a,
                case_b: cases.case_b,
                flags: vec![format!("{which} holds; no partition derived")],
                cases,
                coloring: None,
                edit_distances: None,
                blocks: None,
                classification: None,
            })
        }
        Err(e) => return Err(e),
    };
    let distances = EditDistances {
        raw: edit_distance_model(h, &derivation.raw)?,
        balanced: edit_distance_model(h, &derivation.balanced)?,
        refined: edit_distance_model(h, &derivation.refined)?,
    };
    let (coloring, distance) = match choice {
        ColoringChoice::Raw => (&derivation.raw, distances.raw),
        ColoringChoice::Balanced => (&derivation.balanced, distances.balanced),
        ColoringChoice::Refined => (&derivation.refined, distances.refined),
    };
    let classification = classify_pairs(coloring, beta1)?;
    Ok(StructureReport {
        v_0: classification.v_0,
        v_1: classification.v_1,
        v_2: classification.v_2,
        bad_ksets: Some(bad_kset_count(coloring)),
        edit_distance: Some(distance),
        case_a: cases.case_a,
        case_b: cases.case_b,
        flags: classification.flags.clone(),
        cases,
        coloring: Some(choice),
        edit_distances: Some(distances),
        blocks: Some(derivation.blocks),
        classification: Some(classification),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{build, ExtremalSpec, Kind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_indices(v.iter().copied()).unwrap()
    }

    fn random_coloring(n: usize, k: usize, rng: &mut ChaCha8Rng) -> PartitionColoring {
        let x: Vec<bool> = (0..small_binom(n, r_of(k))).map(|_| rng.gen_bool(0.5)).collect();
        let y: Vec<bool> = (0..small_binom(n, k - r_of(k))).map(|_| rng.gen_bool(0.5)).collect();
        PartitionColoring::from_fn(n, k, |p| x[p.colex_rank()], |q| y[q.colex_rank()]).unwrap()
    }

    fn extremal(n: usize, k: usize, a: usize, kind: Kind) -> Hypergraph {
        build(&ExtremalSpec::canonical(n, k, a, kind).unwrap())
    }

    #[test]
    fn aux_edge_examples() {
        let single = Hypergraph::new(3, 3, [set(&[0, 1, 2])]).unwrap();
        assert_eq!(aux_edge_count(&single).unwrap(), 3);
        assert_eq!(aux_edge_count(&Hypergraph::complete(4, 3).unwrap()).unwrap(), 12);
        let four = Hypergraph::new(5, 4, [set(&[0, 1, 2, 3])]).unwrap();
        assert_eq!(aux_edge_count(&four).unwrap(), 6);
        assert!(aux_adjacent(&single, set(&[0, 1]), set(&[2])).unwrap());
        assert!(!aux_adjacent(&single, set(&[0, 1]), set(&[1])).unwrap());
        assert!(aux_adjacent(&single, set(&[0]), set(&[1, 2])).is_err());
    }

    #[test]
    fn explicit_edges_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = Hypergraph::random(8, 3, 0.4, &mut rng).unwrap();
        let g = AuxGraph::new(&h).unwrap();
        let mut brute = Vec::new();
        for p in subsets_of_range(8, 2) {
            for q in subsets_of_range(8, 1) {
                if g.adjacent(p, q).unwrap() {
                    brute.push((p, q));
                }
            }
        }
        let mut listed = g.explicit_edges().unwrap();
        listed.sort();
        brute.sort();
        assert_eq!(listed, brute);
        assert!(AuxGraph::new(&Hypergraph::empty(13, 3).unwrap()).unwrap().explicit_edges().is_err());
    }

    #[test]
    fn parity_coloring_examples() {
        let c = PartitionColoring::parity(3, 3, set(&[0])).unwrap();
        assert!(c.in_x1(set(&[0, 1])));
        assert!(!c.in_x1(set(&[1, 2])));
        assert!(!c.in_y1(set(&[0])));
        assert!(c.in_y1(set(&[1])));
        for (n, a, r) in [(9usize, 4usize, 2usize), (10, 3, 3), (8, 5, 2)] {
            let c = PartitionColoring::parity(n, 2 * r - 1, VertexSet::range(0, a)).unwrap();
            let expected: u64 = (1..=r).step_by(2).map(|j| small_binom(a, j) * small_binom(n - a, r - j)).sum();
            assert_eq!(c.x1_size() as u64, expected);
        }
    }

    #[test]
    fn model_distance_examples() {
        for kind in [Kind::Odd, Kind::Even] {
            let h = extremal(6, 3, 3, kind);
            let a = VertexSet::range(0, 3);
            let mut c = PartitionColoring::parity(6, 3, a).unwrap();
            if kind == Kind::Even {
                // the even construction pairs X₁ with Y₂
                c = PartitionColoring::from_fn(6, 3, |p| c.in_x1(p), |q| !c.in_y1(q)).unwrap();
            }
            assert_eq!(edit_distance_model(&h, &c).unwrap(), 0);
            let model_pairs: u64 = subsets_of_range(6, 2)
                .flat_map(|p| subsets_of_range(6, 1).map(move |q| (p, q)))
                .filter(|&(p, q)| c.model_adjacent(p, q))
                .count() as u64;
            let total = small_binom(6, 3) * 3;
            assert_eq!(edit_distance_model(&h.complement(), &c).unwrap(), total);
            assert_eq!(model_pairs, h.edge_count() as u64 * 3);
            let toggled = h.toggled(set(&[0, 1, 2])).unwrap();
            assert_eq!(edit_distance_model(&toggled, &c).unwrap(), 3);
        }
    }

    #[test]
    fn bad_sets() {
        let a = VertexSet::range(0, 3);
        let mut c = PartitionColoring::parity(6, 3, a).unwrap();
        assert_eq!(bad_kset_count(&c), 0);
        c.flip_x(set(&[0, 4]));
        let brute = subsets_of_range(6, 3)
            .filter(|&s| {
                let adj: Vec<bool> = subsets(s, 2).map(|p| c.model_adjacent(p, s.difference(p))).collect();
                adj.contains(&true) && adj.contains(&false)
            })
            .count() as u64;
        assert!(brute > 0);
        assert_eq!(bad_kset_count(&c), brute);
        let single = PartitionColoring::parity(3, 3, set(&[1])).unwrap();
        assert!(bad_kset_count(&single) <= 1);
    }

    #[test]
    fn bad_sets_bounded_by_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let h = Hypergraph::random(7, 3, 0.5, &mut rng).unwrap();
            let c = random_coloring(7, 3, &mut rng);
            assert!(bad_kset_count(&c) <= edit_distance_model(&h, &c).unwrap());
        }
    }

    #[test]
    fn cd_examples() {
        let n = 8;
        let a = VertexSet::range(0, 4);
        let c = PartitionColoring::parity(n, 3, a).unwrap();
        let across = cd_counts(&c, 0, 5).unwrap();
        assert_eq!((across.c, across.d), (0, small_binom(n - 2, 1)));
        let inside = cd_counts(&c, 0, 1).unwrap();
        assert_eq!((inside.c, inside.d), (small_binom(n - 2, 1), 0));
        // r′ = 1: C′ is {uv} exactly when ψ(u) = ψ(v)
        assert_eq!((inside.c_prime, inside.d_prime), (1, 0));
        assert_eq!((across.c_prime, across.d_prime), (0, 1));
        assert!(cd_counts(&c, 3, 3).is_err());
    }

    #[test]
    fn cd_sums_hold_for_random_colorings() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, k) in [(7, 3), (8, 4), (9, 5)] {
            let c = random_coloring(n, k, &mut rng);
            let (r, rp) = (c.r(), c.r_prime());
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        let x = cd_counts(&c, u, v).unwrap();
                        assert_eq!(x.c + x.d, small_binom(n - 2, r - 1));
                        assert_eq!(x.c_prime + x.d_prime, small_binom(n - 2, rp - 1));
                        assert_eq!(x, cd_counts(&c, v, u).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classification_recovers_parity_sides() {
        let a = set(&[1, 2, 5, 6]);
        let c = PartitionColoring::parity(9, 3, a).unwrap();
        let out = classify_pairs(&c, 0.01).unwrap();
        assert_eq!(out.v0, 0);
        assert!(out.v_0.is_empty());
        assert_eq!(out.v_1, VertexSet::range(0, 9).difference(a));
        assert_eq!(out.v_2, a);
        assert!(!out.degenerate);
        assert!(out.profiles.r_sets.iter().all(|row| row.majority_fraction == 1.0));
    }

    #[test]
    fn classification_special_colorings() {
        let all = PartitionColoring::from_fn(8, 3, |_| true, |_| true).unwrap();
        let out = classify_pairs(&all, 0.01).unwrap();
        assert!(out.v_2.is_empty());
        assert_eq!(out.similar_pairs, 28);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let random = random_coloring(8, 3, &mut rng);
        let out = classify_pairs(&random, 0.5).unwrap();
        assert!(out.degenerate);
        assert!(out.flags.iter().any(|f| f == "degenerate-threshold"));
        assert_eq!(out.v_0.union(out.v_1).union(out.v_2), VertexSet::range(0, 8));
    }

    #[test]
    fn case_examples() {
        let complete = Hypergraph::complete(9, 3).unwrap();
        let report = cases(&complete, 0.1).unwrap();
        assert!(report.case_a);
        assert_eq!(good_rtuple_count(&complete, set(&[0, 1]), 0.1).unwrap(), 36);
        assert!(matches!(derive_partition(&complete, 0.1), Err(Error::CaseHolds(BlockingCase::CaseA))));
        let empty = Hypergraph::empty(9, 3).unwrap();
        let report = cases(&empty, 0.1).unwrap();
        assert!(!report.case_a && !report.case_b);
        assert_eq!(good_rtuple_count(&empty, set(&[0, 1]), 0.1).unwrap(), 0);
        assert!(good_rtuple_count(&empty, set(&[0]), 0.1).is_err());
    }

    #[test]
    fn good_counts_match_brute_force() {
        let h = extremal(9, 3, 4, Kind::Odd);
        let g = AuxGraph::new(&h).unwrap();
        let nbr = |p: VertexSet| -> Vec<VertexSet> {
            subsets_of_range(9, 1).filter(|&q| g.adjacent(p, q).unwrap()).collect()
        };
        for b in [set(&[0, 1]), set(&[0, 5]), set(&[6, 7])] {
            let nb = nbr(b);
            let brute = subsets_of_range(9, 2)
                .filter(|&a| nbr(a).iter().filter(|q| nb.contains(q)).count() as f64 >= 0.1 * 9.0)
                .count() as u64;
            assert_eq!(good_rtuple_count(&h, b, 0.1).unwrap(), brute);
        }
    }

    #[test]
    fn empty_derivation() {
        let d = derive_partition(&Hypergraph::empty(6, 3).unwrap(), 0.1).unwrap();
        assert_eq!(d.witness, set(&[0, 1]));
        assert!(d.b_prime.is_empty());
        assert_eq!(d.a_double_prime.len(), 15);
        assert!(d.a_prime.is_empty());
    }

    #[test]
    fn derivation_on_extremal_inputs() {
        let mut derived = 0;
        for (n, a, kind) in [(9, 4, Kind::Odd), (10, 5, Kind::Odd), (9, 3, Kind::Even), (8, 4, Kind::Odd)] {
            let h = extremal(n, 3, a, kind);
            let Ok(d) = derive_partition(&h, 0.1) else { continue };
            let big_a = VertexSet::range(0, a);
            let witness_odd = d.witness.intersection(big_a).len() % 2;
            assert!(d.a_prime.iter().all(|p| p.intersection(big_a).len() % 2 == witness_odd), "n={n} |A|={a}");
            assert!(!d.a_prime.is_empty());
            assert_eq!(edit_distance_model(&h, &d.refined).unwrap(), 0);
            assert_eq!(bad_kset_count(&d.refined), 0);
            assert_eq!(d.balanced.x1_size(), small_binom(n, 2).div_ceil(2) as usize);
            derived += 1;
        }
        assert_eq!(derived, 4);
    }

    #[test]
    fn structure_report_json_keys() {
        let h = extremal(9, 3, 4, Kind::Odd);
        let report = structure_report(&h, 0.1, 0.01, ColoringChoice::Refined).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let expected = ["\"V0\"", "\"V1\"", "\"V2\"", "\"badKSets\"", "\"editDistance\"", "\"caseA\"", "\"caseB\"", "\"flags\""];
        let mut last = 0;
        for key in expected {
            let at = json.find(key).unwrap();
            assert!(at >= last, "{key} out of order");
            last = at;
        }
        assert_eq!(report.edit_distance, Some(0));
        let complete = structure_report(&Hypergraph::complete(9, 3).unwrap(), 0.1, 0.01, ColoringChoice::Refined).unwrap();
        assert!(complete.case_a);
        assert_eq!(complete.v_0, VertexSet::range(0, 9));
    }
}
