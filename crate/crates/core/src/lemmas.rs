//! Executable forms of the counting facts used by the stability argument:
//! the `D_F` pair counts and `t`-profile identities of an `r`-uniform
//! family, the Kruskal–Katona clique bound in Lovász's real-valued form,
//! and the even/odd split of the Vandermonde sum.
//!
//! Each check produces a [`CheckReport`] carrying both sides and the
//! margin so that near-misses are visible.

use crate::binom::{binom, binom_real, small_binom};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vset::{subsets, subsets_of_range, VertexSet};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for inequalities `lhs <= rhs`; `0` for exact identities
    /// that hold.
    pub margin: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
}

impl CheckReport {
    fn identity(check: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        CheckReport {
            check: check.into(),
            lhs: lhs as f64,
            rhs: rhs as f64,
            margin: rhs as f64 - lhs as f64,
            verdict: if lhs == rhs { Verdict::Pass } else { Verdict::Fail },
            x: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn require_pair(f: &Hypergraph, u: usize, v: usize) -> Result<()> {
    if u == v || u >= f.n() || v >= f.n() {
        return Err(invalid(format!("need two distinct vertices of [0, {}), got {u} and {v}", f.n())));
    }
    Ok(())
}

fn df_count_unchecked(f: &Hypergraph, u: usize, v: usize) -> u64 {
    let r = f.k();
    let rest = f.vertices().without(u).without(v);
    subsets(rest, r - 1).filter(|t| f.is_edge(t.with(v)) != f.is_edge(t.with(u))).count() as u64
}

/// `|D_F(u, v)|`: `(r+1)`-sets through `u` and `v` where exactly one of
/// `S − u`, `S − v` is an edge of `F`.
pub fn df_count(f: &Hypergraph, u: usize, v: usize) -> Result<u64> {
    require_pair(f, u, v)?;
    Ok(df_count_unchecked(f, u, v))
}

/// `m = Σ |D_F(u, v)|` over unordered pairs.
pub fn df_pair_sum(f: &Hypergraph) -> u64 {
    let n = f.n();
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| df_count_unchecked(f, u, v)).sum()
}

/// `t[i]` counts the `(r+1)`-subsets spanning exactly `i` edges of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TProfile {
    pub r: usize,
    pub n: usize,
    pub t: Vec<u64>,
}

pub fn t_profile(f: &Hypergraph) -> TProfile {
    let r = f.k();
    let mut t = vec![0u64; r + 2];
    for s in subsets_of_range(f.n(), r + 1) {
        let spanned = subsets(s, r).filter(|&e| f.is_edge(e)).count();
        t[spanned] += 1;
    }
    TProfile { r, n: f.n(), t }
}

/// `|E|(n − r) = Σ i·t_i` and `m = Σ_{i=1}^{r} i(r+1−i)·t_i`.
pub fn verify_profile_identities(f: &Hypergraph) -> [CheckReport; 2] {
    let TProfile { r, n, t } = t_profile(f);
    let weighted: u128 = t.iter().enumerate().map(|(i, &c)| i as u128 * c as u128).sum();
    let pair_weighted: u128 = (1..=r).map(|i| (i * (r + 1 - i)) as u128 * t[i] as u128).sum();
    [
        CheckReport::identity("edge-incidence identity", f.edge_count() as u128 * (n - r) as u128, weighted),
        CheckReport::identity("pair-count identity", df_pair_sum(f) as u128, pair_weighted),
    ]
}

/// Real `x >= r − 1` with `binom(x, r) = m`, by bisection to `1e−9`.
pub fn solve_binom_real(m: u64, r: usize) -> f64 {
    let r32 = r as u32;
    let (mut lo, mut hi) = ((r as f64) - 1.0, (r as f64).max(1.0));
    while binom_real(hi, r32) < m as f64 {
        hi *= 2.0;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if binom_real(mid, r32) < m as f64 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `w` with `binom(w, r) = m` when one exists.
fn exact_binom_root(m: u64, r: usize) -> Option<usize> {
    (r..=64).find(|&w| small_binom(w, r) >= m).filter(|&w| small_binom(w, r) == m)
}

const KK_RELATIVE_TOLERANCE: f64 = 1e-6;

/// `t_{r+1} <= binom(x, r+1)` where `binom(x, r) = |E|`.
///
/// When `|E|` is an integer binomial `binom(w, r)` the bound is evaluated
/// exactly; otherwise in floating point, with margins within `1e−6` of the
/// bound reported as inconclusive.
pub fn kk_clique_bound_check(f: &Hypergraph) -> CheckReport {
    let r = f.k();
    let m = f.edge_count() as u64;
    let cliques = t_profile(f).t[r + 1];
    let name = "clique bound";
    if m == 0 {
        return CheckReport { check: name.into(), lhs: 0.0, rhs: 0.0, margin: 0.0, verdict: Verdict::Pass, x: None };
    }
    if let Some(w) = exact_binom_root(m, r) {
        let bound = small_binom(w, r + 1);
        return CheckReport {
            check: name.into(),
            lhs: cliques as f64,
            rhs: bound as f64,
            margin: bound as f64 - cliques as f64,
            verdict: if cliques <= bound { Verdict::Pass } else { Verdict::Fail },
            x: Some(w as f64),
        };
    }
    let x = solve_binom_real(m, r);
    let bound = binom_real(x, r as u32 + 1);
    let margin = bound - cliques as f64;
    let tolerance = KK_RELATIVE_TOLERANCE * bound.abs().max(1.0);
    let verdict = if margin.abs() < tolerance {
        Verdict::Inconclusive
    } else if margin > 0.0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    CheckReport { check: name.into(), lhs: cliques as f64, rhs: bound, margin, verdict, x: Some(x) }
}

/// `m` against `α(1−α)·binom(n, r+1)` with `α = min(ρ, 1−ρ)`. The bound is
/// only promised for large `n`, so this is a measurement, not a gate.
pub fn df_density_margin(f: &Hypergraph) -> CheckReport {
    let (n, r) = (f.n(), f.k());
    let rho = f.edge_count() as f64 / small_binom(n, r) as f64;
    let alpha = rho.min(1.0 - rho);
    let target = alpha * (1.0 - alpha) * small_binom(n, r + 1) as f64;
    let m = df_pair_sum(f) as f64;
    CheckReport {
        check: "pair-count density bound".into(),
        lhs: target,
        rhs: m,
        margin: m - target,
        verdict: if m >= target { Verdict::Pass } else { Verdict::Fail },
        x: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParitySplit {
    pub even_sum: u128,
    pub odd_sum: u128,
}

fn binom_u128(a: usize, b: usize) -> Result<u128> {
    Ok(binom(a as u64, b as u64)? as u128)
}

/// `Σ_{i even} binom(a, r−i)·binom(b, i)` and the odd counterpart.
pub fn parity_split_sums(a: usize, b: usize, r: usize) -> Result<ParitySplit> {
    let mut sums = [0u128; 2];
    for i in 0..=r {
        let term = binom_u128(a, r - i)?
            .checked_mul(binom_u128(b, i)?)
            .ok_or_else(|| Error::Overflow(format!("term {i} of the split sum for ({a}, {b}, {r})")))?;
        sums[i % 2] += term;
    }
    Ok(ParitySplit { even_sum: sums[0], odd_sum: sums[1] })
}

/// `[z^r] (1+z)^a (1−z)^b` by expanding the product up to degree `r`.
pub fn signed_coefficient(a: usize, b: usize, r: usize) -> i128 {
    let mut poly = vec![0i128; r + 1];
    poly[0] = 1;
    for sign in std::iter::repeat_n(1i128, a).chain(std::iter::repeat_n(-1, b)) {
        for d in (1..=r).rev() {
            poly[d] += sign * poly[d - 1];
        }
    }
    poly[r]
}

/// The Vandermonde total and the signed coefficient for one `(a, b, r)`.
pub fn parity_split_identities(a: usize, b: usize, r: usize) -> Result<[CheckReport; 2]> {
    let s = parity_split_sums(a, b, r)?;
    let total = binom_u128(a + b, r)?;
    let diff = s.even_sum as i128 - s.odd_sum as i128;
    let coefficient = signed_coefficient(a, b, r);
    Ok([
        CheckReport::identity("vandermonde total", s.even_sum + s.odd_sum, total),
        CheckReport {
            check: "signed coefficient".into(),
            lhs: diff as f64,
            rhs: coefficient as f64,
            margin: (coefficient - diff) as f64,
            verdict: if diff == coefficient { Verdict::Pass } else { Verdict::Fail },
            x: None,
        },
    ])
}

/// Envelope constant for the `O(n^{r−1})` error term: `2^r · r`.
pub fn evensum_envelope(r: usize) -> f64 {
    (1u64 << r) as f64 * r as f64
}

/// `|exact − n^r/(2·r!)·(1 ± (2c−1)^r)| <= 2^r·r·n^{r−1}` for both parities,
/// with `a = cn` and `b = (1−c)n`.
pub fn evensum_asymptotic_check(c: f64, r: usize, n: usize) -> Result<[CheckReport; 2]> {
    if !(0.0..=1.0).contains(&c) {
        return Err(invalid(format!("c = {c} must lie in [0, 1]")));
    }
    if r == 0 {
        return Err(invalid("r must be positive"));
    }
    let cn = c * n as f64;
    if (cn - cn.round()).abs() > 1e-9 {
        return Err(invalid(format!("c·n = {cn} is not an integer")));
    }
    let a = cn.round() as usize;
    let s = parity_split_sums(a, n - a, r)?;
    let factorial: f64 = (1..=r).map(|i| i as f64).product();
    let scale = (n as f64).powi(r as i32) / (2.0 * factorial);
    let skew = (2.0 * c - 1.0).powi(r as i32);
    let envelope = evensum_envelope(r) * (n as f64).powi(r as i32 - 1);
    let report = |name: &str, exact: u128, lead: f64| {
        let gap = (exact as f64 - lead).abs();
        CheckReport {
            check: name.into(),
            lhs: gap,
            rhs: envelope,
            margin: envelope - gap,
            verdict: if gap <= envelope { Verdict::Pass } else { Verdict::Fail },
            x: None,
        }
    };
    Ok([
        report("even split envelope", s.even_sum, scale * (1.0 + skew)),
        report("odd split envelope", s.odd_sum, scale * (1.0 - skew)),
    ])
}

/// All `r`-subsets of `w` as an `r`-uniform family on `[0, n)`.
pub fn clique_family(n: usize, r: usize, w: VertexSet) -> Result<Hypergraph> {
    Hypergraph::new(n, r, subsets(w, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn df_examples() {
        let e = Hypergraph::new(7, 1, [set(&[0]), set(&[3]), set(&[5])]).unwrap();
        assert_eq!(df_pair_sum(&e), 3 * 4);
        let complete = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(df_pair_sum(&complete), 0);
        let single = Hypergraph::new(4, 2, [set(&[0, 1])]).unwrap();
        // S ∈ {{0,1,2}, {0,1,3}}... through u = 0, v = 2: S = {0,1,2} and {0,2,3}
        assert_eq!(df_count(&single, 0, 2).unwrap(), 1);
        assert_eq!(df_count(&single, 0, 2).unwrap(), df_count(&single, 2, 0).unwrap());
        assert!(df_count(&single, 1, 1).is_err());
        assert!(df_count(&single, 1, 4).is_err());
    }

    #[test]
    fn df_brute_force() {
        let single = Hypergraph::new(4, 2, [set(&[0, 1])]).unwrap();
        let brute = |u: usize, v: usize| {
            subsets_of_range(4, 3)
                .filter(|s| s.contains(u) && s.contains(v))
                .filter(|s| single.is_edge(s.without(u)) != single.is_edge(s.without(v)))
                .count() as u64
        };
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(df_count(&single, u, v).unwrap(), brute(u, v));
                }
            }
        }
    }

    #[test]
    fn profile_of_complete_and_empty() {
        let complete = Hypergraph::complete(8, 3).unwrap();
        let p = t_profile(&complete);
        assert_eq!(p.t, vec![0, 0, 0, 0, small_binom(8, 4)]);
        assert!(verify_profile_identities(&complete).iter().all(CheckReport::passed));
        let empty = Hypergraph::empty(8, 3).unwrap();
        assert_eq!(t_profile(&empty).t[0], small_binom(8, 4));
        assert!(verify_profile_identities(&empty).iter().all(|c| c.passed() && c.lhs == 0.0));
    }

    #[test]
    fn clique_bound_is_tight_on_cliques() {
        for (n, r, w) in [(10, 2, 6), (12, 3, 7), (9, 1, 4)] {
            let f = clique_family(n, r, VertexSet::range(0, w)).unwrap();
            let c = kk_clique_bound_check(&f);
            assert_eq!(c.x, Some(w as f64));
            assert_eq!(c.lhs, small_binom(w, r + 1) as f64);
            assert_eq!(c.margin, 0.0);
            assert_eq!(c.verdict, Verdict::Pass);
        }
        let c = kk_clique_bound_check(&Hypergraph::empty(6, 2).unwrap());
        assert_eq!(c.verdict, Verdict::Pass);
    }

    #[test]
    fn bisection_inverts_binomial() {
        for (m, r) in [(7u64, 2usize), (100, 3), (1, 2), (45, 2)] {
            let x = solve_binom_real(m, r);
            assert!((binom_real(x, r as u32) - m as f64).abs() < 1e-6, "m={m} r={r} x={x}");
        }
        assert!((solve_binom_real(45, 2) - 10.0).abs() < 1e-8);
    }

    #[test]
    fn clique_bound_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let f = Hypergraph::random(10, 2, 0.5, &mut rng).unwrap();
            let c = kk_clique_bound_check(&f);
            assert_ne!(c.verdict, Verdict::Fail, "{c:?}");
        }
    }

    #[test]
    fn parity_split_examples() {
        let s = parity_split_sums(4, 2, 3).unwrap();
        assert_eq!((s.even_sum, s.odd_sum), (8, 12));
        assert_eq!(signed_coefficient(4, 2, 3), -4);
        let s = parity_split_sums(9, 0, 4).unwrap();
        assert_eq!((s.even_sum, s.odd_sum), (126, 0));
        for a in 0..12 {
            let s = parity_split_sums(a, a, 5).unwrap();
            assert_eq!(s.even_sum, s.odd_sum);
        }
        assert!(parity_split_identities(40, 40, 8).unwrap().iter().all(CheckReport::passed));
        assert!(parity_split_sums(200, 3, 40).is_err());
    }

    #[test]
    fn envelope_examples() {
        for n in (8..=64).step_by(2) {
            for r in 1..=6 {
                assert!(evensum_asymptotic_check(0.5, r, n).unwrap().iter().all(CheckReport::passed));
            }
        }
        assert!(evensum_asymptotic_check(1.0, 4, 20).unwrap().iter().all(CheckReport::passed));
        for n in 1..30 {
            let [even, _] = evensum_asymptotic_check(0.0, 1, n).unwrap();
            assert_eq!(even.lhs, 0.0);
        }
        assert!(evensum_asymptotic_check(0.25, 2, 10).is_err());
        assert!(evensum_asymptotic_check(1.5, 2, 10).is_err());
    }

    #[test]
    fn scalar_root_inequality_on_grid() {
        for r in 1..=8 {
            for step in 0..=1000 {
                let alpha = step as f64 / 1000.0;
                let lhs = 1.0 - alpha.powf(1.0 / r as f64);
                assert!(lhs >= (1.0 - alpha) / r as f64 - 1e-12, "alpha={alpha} r={r}");
            }
        }
    }

    #[test]
    fn density_margin_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Hypergraph::random(12, 2, 0.5, &mut rng).unwrap();
        let c = df_density_margin(&f);
        assert_eq!(c.rhs, df_pair_sum(&f) as f64);
        assert!((c.margin - (c.rhs - c.lhs)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn profile_identities_hold(r in 1usize..4, n in 4usize..11, p in 0.0f64..1.0, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Hypergraph::random(n, r, p, &mut rng).unwrap();
            for c in verify_profile_identities(&f) {
                prop_assert!(c.passed(), "{:?}", c);
            }
            let total: u64 = t_profile(&f).t.iter().sum();
            prop_assert_eq!(total, small_binom(n, r + 1));
        }

        #[test]
        fn df_is_complement_invariant(r in 1usize..4, n in 4usize..10, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Hypergraph::random(n, r, 0.5, &mut rng).unwrap();
            prop_assert_eq!(df_pair_sum(&f), df_pair_sum(&f.complement()));
        }
    }
}
