//! Parity-obstructed extremal constructions and their degree thresholds.
//!
//! For a bipartition `(A, B)` of `[0, n)`, the odd construction keeps every
//! k-set meeting `A` in an odd number of vertices and the even construction
//! keeps the rest. The extremal family collects the members that cannot
//! have a perfect matching for parity reasons; its largest minimum ℓ-degree
//! is the exact threshold reported by [`threshold`].

use crate::binom::small_binom;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vset::{subsets_of_range, VertexSet};
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Edges meet `A` in an odd number of vertices.
    Odd,
    /// Edges meet `A` in an even number of vertices (the complement).
    Even,
}

impl Kind {
    pub fn parity(self) -> usize {
        match self {
            Kind::Odd => 1,
            Kind::Even => 0,
        }
    }

    fn keeps(self, meet: usize) -> bool {
        meet % 2 == self.parity()
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Odd => "odd",
            Kind::Even => "even",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "odd" => Ok(Kind::Odd),
            "even" => Ok(Kind::Even),
            other => Err(invalid(format!("unknown construction kind {other:?}"))),
        }
    }
}

/// An ordered split `(A, B)` of `[0, n)` with both sides non-empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    a: VertexSet,
}

impl Bipartition {
    pub fn new(n: usize, a: VertexSet) -> Result<Self> {
        let all = VertexSet::range(0, n.min(64));
        if n > 64 || !a.is_subset(all) {
            return Err(invalid(format!("{a:?} is not a subset of [0, {n})")));
        }
        if a.is_empty() || a == all {
            return Err(invalid("both sides of a bipartition must be non-empty"));
        }
        Ok(Bipartition { n, a })
    }

    /// `A = {0, ..., size_a - 1}`.
    pub fn canonical(n: usize, size_a: usize) -> Result<Self> {
        if size_a > n {
            return Err(invalid(format!("|A| = {size_a} exceeds n = {n}")));
        }
        Self::new(n, VertexSet::range(0, size_a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> VertexSet {
        self.a
    }

    pub fn b(&self) -> VertexSet {
        VertexSet::range(0, self.n).difference(self.a)
    }
}

/// One member of the construction family: kind, bipartition and uniformity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalSpec {
    pub kind: Kind,
    pub bipartition: Bipartition,
    pub k: usize,
}

impl ExtremalSpec {
    pub fn new(kind: Kind, bipartition: Bipartition, k: usize) -> Result<Self> {
        if k == 0 || k > bipartition.n() {
            return Err(invalid(format!("uniformity k = {k} must lie in [1, n = {}]", bipartition.n())));
        }
        Ok(ExtremalSpec { kind, bipartition, k })
    }

    /// Spec with the canonical `A = {0, ..., size_a - 1}`.
    pub fn canonical(n: usize, k: usize, size_a: usize, kind: Kind) -> Result<Self> {
        Self::new(kind, Bipartition::canonical(n, size_a)?, k)
    }

    pub fn n(&self) -> usize {
        self.bipartition.n()
    }

    pub fn size_a(&self) -> usize {
        self.bipartition.a().len()
    }

    /// Whether the parity rules place this spec in the extremal family:
    /// even kind needs `|A|` odd; odd kind needs `|A|` even when `n/k` is odd
    /// and `|A|` odd when `n/k` is even.
    pub fn in_extremal_family(&self) -> bool {
        let (n, k) = (self.n(), self.k);
        if k < 2 || n % k != 0 {
            return false;
        }
        let a_odd = self.size_a() % 2 == 1;
        match self.kind {
            Kind::Even => a_odd,
            Kind::Odd => a_odd == ((n / k) % 2 == 0),
        }
    }

    pub fn contains(&self, e: VertexSet) -> bool {
        self.kind.keeps(e.intersection(self.bipartition.a()).len())
    }

    /// `|E|` of the construction, by summing over intersection sizes.
    pub fn edge_count(&self) -> u64 {
        let a = self.size_a();
        let b = self.n() - a;
        (0..=self.k.min(a))
            .filter(|&j| self.kind.keeps(j))
            .map(|j| small_binom(a, j) * small_binom(b, self.k - j))
            .sum()
    }
}

impl fmt::Display for ExtremalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, k={}, |A|={})", self.kind, self.n(), self.k, self.size_a())
    }
}

pub fn build(spec: &ExtremalSpec) -> Hypergraph {
    Hypergraph::from_predicate(spec.n(), spec.k, |e| spec.contains(e)).expect("spec uniformity was validated")
}

fn require_divisible(n: usize, k: usize) -> Result<()> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(invalid(format!("k = {k} does not divide n = {n}")));
    }
    Ok(())
}

/// The extremal family up to isomorphism: one canonical spec per admissible
/// `(|A|, kind)`, ordered by `|A|` then kind.
pub fn hext_family(n: usize, k: usize) -> Result<Vec<ExtremalSpec>> {
    require_divisible(n, k)?;
    if k < 2 {
        return Err(invalid("the extremal family needs k >= 2"));
    }
    let mut family = Vec::new();
    for size_a in 1..n {
        for kind in [Kind::Odd, Kind::Even] {
            let spec = ExtremalSpec::canonical(n, k, size_a, kind)?;
            if spec.in_extremal_family() {
                family.push(spec);
            }
        }
    }
    Ok(family)
}

/// Minimum ℓ-degree of the construction from the intersection profiles of
/// ℓ-sets with `A`. Agrees with `min_l_degree(build(spec), ℓ)`.
pub fn min_l_degree_closed(spec: &ExtremalSpec, l: usize) -> Result<u64> {
    let k = spec.k;
    if l >= k {
        return Err(Error::InvalidQuery(format!("ℓ = {l} must be below k = {k}")));
    }
    let a = spec.size_a();
    let b = spec.n() - a;
    let lo = l.saturating_sub(b);
    let hi = l.min(a);
    let degree_at = |i: usize| -> u64 {
        // S meets A in i vertices; an edge through S adds j more A-vertices
        (0..=k - l)
            .filter(|&j| spec.kind.keeps(i + j))
            .map(|j| small_binom(a - i, j) * small_binom(b - (l - i), k - l - j))
            .sum()
    };
    Ok((lo..=hi).map(degree_at).min().unwrap_or(0))
}

/// A value that is an integer or a half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn from_int(v: i64) -> Self {
        HalfInteger { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn floor(self) -> i64 {
        self.twice.div_euclid(2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::ops::Sub for HalfInteger {
    type Output = HalfInteger;

    fn sub(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger { twice: self.twice - rhs.twice }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}", self.to_f64())
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_integer() {
            s.serialize_i64(self.twice / 2)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}

/// The four-case closed form for the codegree threshold (ℓ = k − 1).
///
/// The two odd-k cases test the parity of `(n-1)/2`, which only makes sense
/// for odd `n`; even `n` falls through to the last case.
pub fn threshold_codegree_formula(n: usize, k: usize) -> Result<HalfInteger> {
    require_divisible(n, k)?;
    if k < 3 {
        return Err(invalid("the codegree formula is stated for k >= 3"));
    }
    let (n2, k2) = (n as i64, 2 * k as i64);
    // everything in units of 1/2: n/2 - k + c  ->  n - 2k + 2c
    let offset = if k.is_multiple_of(4) && (n / k) % 2 == 1 {
        4
    } else if k % 2 == 1 && n % 2 == 1 && ((n - 1) / 2) % 2 == 1 {
        3
    } else if k % 2 == 1 && n % 2 == 1 {
        1
    } else {
        2
    };
    Ok(HalfInteger::from_twice(n2 - k2 + offset))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: Kind,
    #[serde(rename = "sizeA")]
    pub size_a: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub kind: Kind,
    #[serde(rename = "sizeA")]
    pub size_a: usize,
    #[serde(rename = "minDegree")]
    pub min_degree: u64,
}

/// `δ(n, k, ℓ)` together with every family member's minimum ℓ-degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub delta: u64,
    /// Closed-form codegree value; present whenever `k >= 3`.
    pub formula_k_minus_1: Option<HalfInteger>,
    /// `delta - formula`, reported only for ℓ = k − 1.
    pub formula_difference: Option<HalfInteger>,
    pub witnesses: Vec<Witness>,
    pub table: Vec<TableRow>,
}

impl ThresholdReport {
    /// Whether the enumerated codegree threshold equals the closed form
    /// (`None` when no comparison applies).
    pub fn formula_agrees(&self) -> Option<bool> {
        self.formula_difference.map(|d| d.twice() == 0)
    }
}

pub fn threshold(n: usize, k: usize, l: usize) -> Result<ThresholdReport> {
    require_divisible(n, k)?;
    if l == 0 || l >= k {
        return Err(Error::InvalidQuery(format!("ℓ = {l} must lie in [1, k-1] = [1, {}]", k.saturating_sub(1))));
    }
    let family = hext_family(n, k)?;
    let table = family
        .iter()
        .map(|spec| {
            Ok(TableRow { kind: spec.kind, size_a: spec.size_a(), min_degree: min_l_degree_closed(spec, l)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = table.iter().map(|r| r.min_degree).max().unwrap_or(0);
    let witnesses = table
        .iter()
        .filter(|r| r.min_degree == delta)
        .map(|r| Witness { kind: r.kind, size_a: r.size_a })
        .collect();
    let formula = if k >= 3 { Some(threshold_codegree_formula(n, k)?) } else { None };
    let formula_difference = formula
        .filter(|_| l == k - 1)
        .map(|f| HalfInteger::from_int(delta as i64) - f);
    Ok(ThresholdReport { n, k, l, delta, formula_k_minus_1: formula, formula_difference, witnesses, table })
}

/// The parity argument ruling out a perfect matching in a family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCertificate {
    /// Edges in any perfect matching, `n/k`.
    pub matching_size: usize,
    /// Parity forced on `Σ |e ∩ A|` over a perfect matching.
    pub lhs_parity: usize,
    /// Parity of `|A|`, which that sum must equal.
    pub rhs_parity: usize,
    pub conclusion: String,
}

pub fn no_pm_certificate(spec: &ExtremalSpec, n_over_k: usize) -> Result<ParityCertificate> {
    if n_over_k * spec.k != spec.n() {
        return Err(invalid(format!("{n_over_k} * {} != n = {}", spec.k, spec.n())));
    }
    if !spec.in_extremal_family() {
        return Err(Error::CertificateNotApplicable(format!("{spec} is outside the extremal family")));
    }
    let lhs = match spec.kind {
        Kind::Odd => n_over_k % 2,
        Kind::Even => 0,
    };
    let rhs = spec.size_a() % 2;
    if lhs == rhs {
        return Err(Error::CertificateNotApplicable(format!("parities agree for {spec}")));
    }
    let term = match spec.kind {
        Kind::Odd => "odd",
        Kind::Even => "even",
    };
    Ok(ParityCertificate {
        matching_size: n_over_k,
        lhs_parity: lhs,
        rhs_parity: rhs,
        conclusion: format!(
            "a perfect matching has {n_over_k} edges each meeting A in an {term} number of vertices, \
             so it covers a number of A-vertices of parity {lhs}, but |A| = {} has parity {rhs}",
            spec.size_a()
        ),
    })
}

fn check_shape(h: &Hypergraph, n: usize, k: usize) -> Result<()> {
    if h.n() != n || h.k() != k {
        return Err(invalid(format!("hypergraph is ({}, {}) but spec is ({n}, {k})", h.n(), h.k())));
    }
    Ok(())
}

fn edits_against(h: &Hypergraph, spec: &ExtremalSpec) -> u64 {
    let inside = h.edges().iter().filter(|e| spec.contains(**e)).count() as u64;
    (h.edge_count() as u64 - inside) + (spec.edge_count() - inside)
}

/// `|E(H) △ E(build(spec))|`.
pub fn closeness(h: &Hypergraph, spec: &ExtremalSpec) -> Result<u64> {
    check_shape(h, spec.n(), spec.k)?;
    Ok(edits_against(h, spec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosenessFit {
    pub a: VertexSet,
    pub edits: u64,
    /// False when the value is only a local-search upper bound.
    pub exact: bool,
}

const EXACT_CLOSENESS_MAX_N: usize = 16;

/// Minimum edit distance from `h` to the `kind` construction over
/// near-balanced bipartitions (`|A| ∈ {⌊n/2⌋, ⌈n/2⌉}`).
pub fn closeness_min(h: &Hypergraph, kind: Kind, mode: SearchMode) -> Result<ClosenessFit> {
    let (n, k) = (h.n(), h.k());
    if n < 2 {
        return Err(invalid("a bipartition needs at least two vertices"));
    }
    let sizes: Vec<usize> = if n % 2 == 0 { vec![n / 2] } else { vec![n / 2, n / 2 + 1] };
    let edits_for = |a: VertexSet| -> u64 {
        let spec = ExtremalSpec { kind, bipartition: Bipartition { n, a }, k };
        edits_against(h, &spec)
    };
    match mode {
        SearchMode::Exact => {
            if n > EXACT_CLOSENESS_MAX_N {
                return Err(invalid(format!("exact closeness search is limited to n <= {EXACT_CLOSENESS_MAX_N}")));
            }
            let mut best: Option<ClosenessFit> = None;
            for &s in &sizes {
                for a in subsets_of_range(n, s) {
                    let edits = edits_for(a);
                    if best.as_ref().is_none_or(|b| edits < b.edits) {
                        best = Some(ClosenessFit { a, edits, exact: true });
                    }
                }
            }
            Ok(best.expect("at least one bipartition"))
        }
        SearchMode::Heuristic => {
            let mut best: Option<ClosenessFit> = None;
            for seed in heuristic_seeds(h) {
                let fit = local_search(n, seed, &sizes, &edits_for);
                if best.as_ref().is_none_or(|b| fit.edits < b.edits) {
                    best = Some(fit);
                }
            }
            Ok(best.expect("at least one seed"))
        }
    }
}

const PIVOT_SEEDS: usize = 4;

/// Starting sets for the local search: the lowest- and highest-degree
/// halves, and for a few pivots `v` the halves of `V` closest to and
/// farthest from `v` by pair degree. In every parity construction the
/// pair degree of `{u, v}` depends only on which sides `u` and `v` lie.
fn heuristic_seeds(h: &Hypergraph) -> Vec<VertexSet> {
    let n = h.n();
    let half = |mut order: Vec<(u64, usize)>| -> [VertexSet; 2] {
        order.sort_unstable();
        [
            order.iter().take(n / 2).map(|&(_, v)| v).collect(),
            order.iter().rev().take(n / 2).map(|&(_, v)| v).collect(),
        ]
    };
    let degrees = h.degree_table(1);
    let mut seeds = half((0..n).map(|v| (degrees.get(&VertexSet::singleton(v)).copied().unwrap_or(0), v)).collect()).to_vec();
    if h.k() >= 2 {
        let pairs = h.degree_table(2);
        for v in 0..n.min(PIVOT_SEEDS) {
            let codegree = |u: usize| pairs.get(&VertexSet::singleton(u).with(v)).copied().unwrap_or(0);
            seeds.extend(half((0..n).filter(|&u| u != v).map(|u| (codegree(u), u)).collect()));
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    seeds
}

/// Best-improvement descent over remove, add and swap moves that keep
/// `|A|` among `sizes`.
fn local_search(n: usize, seed: VertexSet, sizes: &[usize], edits_for: &impl Fn(VertexSet) -> u64) -> ClosenessFit {
    let mut a = seed;
    let mut edits = edits_for(a);
    loop {
        let mut improved: Option<(VertexSet, u64)> = None;
        let mut consider = |cand: VertexSet| {
            if cand.is_empty() || !sizes.contains(&cand.len()) {
                return;
            }
            let e = edits_for(cand);
            if e < improved.map_or(edits, |(_, best)| best) {
                improved = Some((cand, e));
            }
        };
        let b = VertexSet::range(0, n).difference(a);
        for u in a.iter() {
            consider(a.without(u));
            for v in b.iter() {
                consider(a.without(u).with(v));
            }
        }
        for v in b.iter() {
            consider(a.with(v));
        }
        match improved {
            Some((next, e)) => {
                a = next;
                edits = e;
            }
            None => break,
        }
    }
    ClosenessFit { a, edits, exact: false }
}
