//! The self-check suite behind `hyperthresh verify`.
//!
//! Each criterion cross-checks two independent routes inside the library
//! (certificate against solver, closed form against enumeration, and so
//! on). `Smoke` shrinks the parameter ranges to finish in seconds; `Full`
//! runs the complete ranges.

use crate::absorbing::{enumerate_over_all_splits, is_absorbing, pm_via_absorption, PipelineParams, PipelineStatus};
use crate::auxgraph::{aux_edge_count, bad_kset_count, cd_counts, classify_pairs, edit_distance_model, PartitionColoring};
use crate::binom::small_binom;
use crate::error::{invalid, Error, Result};
use crate::extremal::{build, hext_family, min_l_degree_closed, no_pm_certificate, threshold};
use crate::hypergraph::Hypergraph;
use crate::lemmas::{
    evensum_asymptotic_check, kk_clique_bound_check, parity_split_identities, verify_profile_identities, Verdict,
};
use crate::matching::{find_perfect_matching, verify_matching};
use crate::vset::{subsets, VertexSet};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Smoke,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Level::Smoke),
            "full" => Ok(Level::Full),
            other => Err(invalid(format!("unknown level {other:?}; expected smoke or full"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub level: Level,
    pub seed: u64,
    /// Worker threads; criteria are distributed across them.
    pub jobs: usize,
    pub record_timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { level: Level::Smoke, seed: 0, jobs: 1, record_timings: false }
    }
}

const MAX_LISTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    /// The first few failure messages.
    pub examples: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

struct Tally {
    checked: u64,
    failures: u64,
    examples: Vec<String>,
    warnings: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failures: 0, examples: Vec::new(), warnings: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_LISTED {
                self.examples.push(describe());
            }
        }
    }

    /// Records an error from a library call as a failure.
    fn ok<T>(&mut self, what: impl FnOnce() -> String, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }
}

type Runner = fn(Level, u64) -> Tally;

const CRITERIA: [(&str, Runner); 9] = [
    ("extremal non-matchability", extremal_non_matchability),
    ("threshold formula agreement", threshold_formula),
    ("closed-form degrees", closed_form_degrees),
    ("absorber soundness", absorber_soundness),
    ("profile identities and clique bound", profile_identities),
    ("parity-split sums", parity_split),
    ("auxiliary-graph exactness", auxgraph_exactness),
    ("partition recovery", partition_recovery),
    ("pipeline sanity", pipeline_sanity),
];

fn pick(level: Level, smoke: usize, full: usize) -> usize {
    match level {
        Level::Smoke => smoke,
        Level::Full => full,
    }
}

fn extremal_non_matchability(level: Level, _seed: u64) -> Tally {
    let mut t = Tally::new();
    let max_n = pick(level, 10, 15);
    for k in 3..=5 {
        for n in (k..=max_n).step_by(k) {
            let Some(family) = t.ok(|| format!("H_ext({n}, {k})"), hext_family(n, k)) else { continue };
            for spec in family {
                let cert = no_pm_certificate(&spec, n / k);
                t.check(cert.is_ok(), || format!("{spec}: no parity certificate ({})", cert.unwrap_err()));
                let found = find_perfect_matching(&build(&spec));
                t.check(matches!(found, Ok(None)), || format!("{spec}: solver did not prove absence"));
            }
        }
    }
    t
}

const THRESHOLD_ANCHORS: [(usize, usize, u64); 3] = [(9, 3, 2), (12, 3, 4), (12, 4, 4)];

fn threshold_formula(level: Level, _seed: u64) -> Tally {
    let mut t = Tally::new();
    for (n, k, delta) in THRESHOLD_ANCHORS {
        if let Some(rep) = t.ok(|| format!("threshold({n}, {k})"), threshold(n, k, k - 1)) {
            t.check(rep.delta == delta, || format!("δ({n}, {k}, {}) = {} but expected {delta}", k - 1, rep.delta));
        }
    }
    let max_n = pick(level, 16, 28);
    for k in 3..=4 {
        for n in (k..=max_n).step_by(k) {
            let Some(rep) = t.ok(|| format!("threshold({n}, {k})"), threshold(n, k, k - 1)) else { continue };
            let agrees = rep.formula_agrees() == Some(true);
            let describe = || {
                let formula = rep.formula_k_minus_1.map(|f| f.to_string()).unwrap_or_default();
                format!("({n}, {k}): enumeration {} vs formula {formula}", rep.delta)
            };
            if n >= 3 * k {
                t.check(agrees, describe);
            } else if !agrees {
                t.warnings.push(describe());
            }
        }
    }
    t
}

fn closed_form_degrees(level: Level, _seed: u64) -> Tally {
    let mut t = Tally::new();
    let max_n = pick(level, 9, 14);
    for k in 2..=7 {
        for n in (k..=max_n).step_by(k) {
            let Some(family) = t.ok(|| format!("H_ext({n}, {k})"), hext_family(n, k)) else { continue };
            for spec in family {
                let h = build(&spec);
                for l in 0..k {
                    let closed = min_l_degree_closed(&spec, l);
                    let brute = h.min_l_degree(l);
                    t.check(matches!((&closed, &brute), (Ok(a), Ok(b)) if a == b), || {
                        format!("{spec}, ℓ = {l}: closed {closed:?} vs enumerated {brute:?}")
                    });
                }
            }
        }
    }
    t
}

fn random_kset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> VertexSet {
    VertexSet::from_indices(sample(rng, n, k)).expect("sampled indices lie below n <= 64")
}

fn absorber_soundness(level: Level, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xab50);
    let k = 3;
    for _ in 0..pick(level, 20, 100) {
        let n = rng.gen_range(7..=12);
        let p = rng.gen_range(0.3..0.95);
        let h = Hypergraph::random(n, k, p, &mut rng).expect("valid random parameters");
        let q = random_kset(&mut rng, n, k);
        let label = || format!("n = {n}, p = {p:.3}, Q = {q}");
        let Some(singles) = t.ok(label, enumerate_over_all_splits(&h, q, false, None)) else { continue };
        let Some(doubles) = t.ok(label, enumerate_over_all_splits(&h, q, true, None)) else { continue };
        for &s in singles.sets.iter().chain(&doubles.sets) {
            let verdict = is_absorbing(&h, s, q);
            t.check(matches!(verdict, Ok(Some(_))), || format!("{}: structured absorber {s} fails", label()));
        }
        let outside = h.vertices().difference(q);
        let generic = subsets(outside, k).filter(|&s| matches!(is_absorbing(&h, s, q), Ok(Some(_)))).count();
        t.check(generic >= singles.sets.len(), || {
            format!("{}: {generic} generic k-absorbers < {} structured", label(), singles.sets.len())
        });
    }
    t
}

fn profile_identities(level: Level, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
    for _ in 0..pick(level, 100, 500) {
        let r = rng.gen_range(1..=3);
        let n = rng.gen_range(r + 1..=12);
        let p = rng.gen_range(0.0..1.0);
        let f = Hypergraph::random(n, r, p, &mut rng).expect("valid random parameters");
        for c in verify_profile_identities(&f) {
            t.check(c.passed(), || format!("r = {r}, n = {n}: {} {} != {}", c.check, c.lhs, c.rhs));
        }
        let kk = kk_clique_bound_check(&f);
        t.check(kk.verdict != Verdict::Fail, || format!("r = {r}, n = {n}: clique bound {} > {}", kk.lhs, kk.rhs));
        if kk.verdict == Verdict::Inconclusive {
            t.warnings.push(format!("r = {r}, n = {n}: clique bound inconclusive (margin {})", kk.margin));
        }
    }
    t
}

const ENVELOPE_FRACTIONS: [(usize, usize); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

fn parity_split(level: Level, _seed: u64) -> Tally {
    let mut t = Tally::new();
    let max_ab = pick(level, 20, 40);
    for a in 0..=max_ab {
        for b in 0..=max_ab {
            for r in 0..=8 {
                let Some(checks) = t.ok(|| format!("({a}, {b}, {r})"), parity_split_identities(a, b, r)) else {
                    continue;
                };
                for c in checks {
                    t.check(c.passed(), || format!("({a}, {b}, {r}): {} {} != {}", c.check, c.lhs, c.rhs));
                }
            }
        }
    }
    let max_n = pick(level, 32, 64);
    for (num, den) in ENVELOPE_FRACTIONS {
        let c = num as f64 / den as f64;
        for n in (den..=max_n).step_by(den) {
            for r in 1..=8 {
                let Some(checks) = t.ok(|| format!("c = {c}, r = {r}, n = {n}"), evensum_asymptotic_check(c, r, n))
                else {
                    continue;
                };
                for e in checks {
                    t.check(e.passed(), || format!("c = {c}, r = {r}, n = {n}: {} {} > {}", e.check, e.lhs, e.rhs));
                }
            }
        }
    }
    t
}

fn check_cd_sums(t: &mut Tally, coloring: &PartitionColoring) {
    let n = coloring.n();
    let (r, rp) = (coloring.r(), coloring.r_prime());
    for u in 0..n {
        for v in u + 1..n {
            let Some(x) = t.ok(|| format!("cd_counts({u}, {v})"), cd_counts(coloring, u, v)) else { continue };
            t.check(x.c + x.d == small_binom(n - 2, r - 1), || format!("n = {n}: C + D at ({u}, {v}) is {}", x.c + x.d));
            t.check(x.c_prime + x.d_prime == small_binom(n - 2, rp - 1), || {
                format!("n = {n}: C′ + D′ at ({u}, {v}) is {}", x.c_prime + x.d_prime)
            });
        }
    }
}

fn auxgraph_exactness(level: Level, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa0);
    for _ in 0..pick(level, 30, 100) {
        let k = rng.gen_range(3..=5);
        let n = rng.gen_range(k..=12);
        let h = Hypergraph::random(n, k, rng.gen_range(0.0..1.0), &mut rng).expect("valid random parameters");
        let expected = h.edge_count() as u64 * small_binom(k, k.div_ceil(2));
        if let Some(count) = t.ok(|| format!("aux_edge_count n = {n}, k = {k}"), aux_edge_count(&h)) {
            t.check(count == expected, || format!("n = {n}, k = {k}: {count} auxiliary edges, expected {expected}"));
        }
    }
    let max_n = pick(level, 9, 10);
    for k in 3..=5 {
        for n in (k..=max_n).step_by(k) {
            let Some(family) = t.ok(|| format!("H_ext({n}, {k})"), hext_family(n, k)) else { continue };
            for spec in family {
                let Some(coloring) = t.ok(|| format!("{spec}"), PartitionColoring::for_spec(&spec)) else { continue };
                let distance = edit_distance_model(&build(&spec), &coloring);
                t.check(matches!(distance, Ok(0)), || format!("{spec}: model edit distance {distance:?}"));
                let bad = bad_kset_count(&coloring);
                t.check(bad == 0, || format!("{spec}: {bad} bad k-sets"));
                check_cd_sums(&mut t, &coloring);
            }
        }
    }
    for k in 3..=5 {
        for n in k..=max_n {
            let mut psi_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let Some(coloring) = t.ok(
                || format!("random coloring n = {n}, k = {k}"),
                PartitionColoring::from_fn(n, k, |_| rng.gen_bool(0.5), |_| psi_rng.gen_bool(0.5)),
            ) else {
                continue;
            };
            check_cd_sums(&mut t, &coloring);
        }
    }
    t
}

fn partition_recovery(_level: Level, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    for n in 8..=10 {
        for k in 3..=4 {
            for size in 1..n {
                let spread = random_kset(&mut rng, n, size);
                for a in [VertexSet::range(0, size), spread] {
                    let b = VertexSet::range(0, n).difference(a);
                    let label = || format!("n = {n}, k = {k}, A = {a}");
                    let Some(c) = t.ok(label, PartitionColoring::parity(n, k, a)) else { continue };
                    let Some(out) = t.ok(label, classify_pairs(&c, 0.01)) else { continue };
                    let sides = (out.v_1, out.v_2);
                    t.check(out.v_0.is_empty() && (sides == (a, b) || sides == (b, a)), || {
                        format!("{}: V0 = {}, V1 = {}, V2 = {}", label(), out.v_0, out.v_1, out.v_2)
                    });
                }
            }
        }
    }
    t
}

fn pipeline_sanity(level: Level, seed: u64) -> Tally {
    let mut t = Tally::new();
    let params = PipelineParams { seed, ..PipelineParams::default() };
    let max_n = pick(level, 12, 20);
    for k in 2..=8 {
        for n in (k..=max_n).step_by(k) {
            let label = || format!("K_{n}^{k}");
            let Some(h) = t.ok(label, Hypergraph::complete(n, k)) else { continue };
            let Some(rep) = t.ok(label, pm_via_absorption(&h, params)) else { continue };
            let verified = rep.matching.as_ref().is_some_and(|m| verify_matching(&h, m, true).is_valid());
            t.check(rep.status == PipelineStatus::Perfect && verified, || {
                format!("{}: status {:?}, verified {verified}", label(), rep.status)
            });
        }
    }
    if let Some(family) = t.ok(|| "H_ext(12, 3)".into(), hext_family(12, 3)) {
        for spec in family {
            let h = build(&spec);
            let Some(first) = t.ok(|| format!("{spec}"), pm_via_absorption(&h, params)) else { continue };
            t.check(first.status == PipelineStatus::NotPerfect, || format!("{spec}: status {:?}", first.status));
            let again = pm_via_absorption(&h, params);
            let same = again.is_ok_and(|r| serde_json::to_string(&r).ok() == serde_json::to_string(&first).ok());
            t.check(same, || format!("{spec}: repeated run differs"));
        }
    }
    t
}

fn run_one(id: usize, opts: SuiteOptions) -> CriterionResult {
    let (name, runner) = CRITERIA[id - 1];
    let start = Instant::now();
    let tally = runner(opts.level, opts.seed);
    CriterionResult {
        id,
        name,
        passed: tally.failures == 0,
        checked: tally.checked,
        failures: tally.failures,
        examples: tally.examples,
        warnings: tally.warnings,
        elapsed_ms: opts.record_timings.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

/// Runs the criteria whose ids are listed, in id order in the report.
pub fn run_criteria(ids: &[usize], opts: SuiteOptions) -> Result<SuiteReport> {
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > CRITERIA.len()) {
        return Err(invalid(format!("criterion {bad} does not exist; ids run 1 to {}", CRITERIA.len())));
    }
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(ids.len()));
    std::thread::scope(|scope| {
        for _ in 0..opts.jobs.clamp(1, ids.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&id) = ids.get(i) else { break };
                let result = run_one(id, opts);
                results.lock().expect("no worker panics while holding the lock").push(result);
            });
        }
    });
    let mut criteria = results.into_inner().expect("workers have finished");
    criteria.sort_by_key(|c| c.id);
    Ok(SuiteReport { level: opts.level, seed: opts.seed, passed: criteria.iter().all(|c| c.passed), criteria })
}

pub fn run_suite(opts: SuiteOptions) -> SuiteReport {
    let all: Vec<usize> = (1..=CRITERIA.len()).collect();
    run_criteria(&all, opts).expect("every listed id exists")
}

impl SuiteReport {
    /// One `PASS`/`FAIL` line per criterion.
    pub fn summary_lines(&self) -> Vec<String> {
        self.criteria
            .iter()
            .map(|c| {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                format!("{verdict} [{}] {} ({} checks, {} failures)", c.id, c.name, c.checked, c.failures)
            })
            .collect()
    }
}
