//! Brute-force oracles shared by the integration tests. They work on plain
//! `u64` masks and never call into the library's algorithms.

#![allow(dead_code)]

use hyperthresh::{Hypergraph, VertexSet};
use std::collections::HashSet;

pub fn mask(s: VertexSet) -> u64 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

pub fn vset(m: u64) -> VertexSet {
    VertexSet::from_indices((0..64).filter(|v| m >> v & 1 == 1)).unwrap()
}

pub fn edge_masks(h: &Hypergraph) -> HashSet<u64> {
    h.edges().iter().map(|&e| mask(e)).collect()
}

pub fn from_masks(n: usize, k: usize, edges: impl IntoIterator<Item = u64>) -> Hypergraph {
    Hypergraph::new(n, k, edges.into_iter().map(vset)).unwrap()
}

/// All `size`-subsets of the bits of `universe`, by recursion on the lowest bit.
pub fn combos(universe: u64, size: usize) -> Vec<u64> {
    fn go(rest: u64, size: usize, acc: u64, out: &mut Vec<u64>) {
        if size == 0 {
            out.push(acc);
            return;
        }
        if (rest.count_ones() as usize) < size {
            return;
        }
        let low = rest & rest.wrapping_neg();
        go(rest & !low, size - 1, acc | low, out);
        go(rest & !low, size, acc, out);
    }
    let mut out = Vec::new();
    go(universe, size, 0, &mut out);
    out
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Pascal's triangle in `u128`.
pub fn pascal(max: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; max + 1]; max + 1];
    for a in 0..=max {
        t[a][0] = 1;
        for b in 1..=a {
            t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
        }
    }
    t
}

pub fn choose(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    (0..b as u128).fold(1u128, |acc, i| acc * (a as u128 - i) / (i + 1))
}

/// Family members straight from the definition: the even construction for
/// odd `|A|`, and the odd construction when `|A|` and `n/k` differ in parity.
pub fn family(n: usize, k: usize) -> Vec<(bool, usize)> {
    let mut out = Vec::new();
    for a in 1..n {
        if a % 2 == 1 {
            out.push((false, a));
        }
        if a % 2 != (n / k) % 2 {
            out.push((true, a));
        }
    }
    out
}

/// Edges meeting `A = {0..a}` oddly (`odd`) or evenly.
pub fn construction(n: usize, k: usize, a: usize, odd: bool) -> Vec<u64> {
    let a_mask = full(a);
    combos(full(n), k).into_iter().filter(|e| ((e & a_mask).count_ones() % 2 == 1) == odd).collect()
}

/// Perfect matching of the vertices in `target` using edges inside it:
/// cover the lowest uncovered vertex in every possible way.
pub fn has_perfect_matching(edges: &HashSet<u64>, k: usize, target: u64) -> bool {
    fn go(by_vertex: &[Vec<u64>], left: u64) -> bool {
        if left == 0 {
            return true;
        }
        let v = left.trailing_zeros() as usize;
        by_vertex[v].iter().any(|&e| e & !left == 0 && go(by_vertex, left & !e))
    }
    if !(target.count_ones() as usize).is_multiple_of(k) {
        return false;
    }
    let mut by_vertex = vec![Vec::new(); 64];
    for &e in edges {
        if e & !target == 0 {
            by_vertex[e.trailing_zeros() as usize].push(e);
        }
    }
    go(&by_vertex, target)
}

/// Every partition of `target` into `k`-sets, in the order produced by
/// always placing the lowest remaining vertex.
pub fn partitions(target: u64, k: usize) -> Vec<Vec<u64>> {
    if target == 0 {
        return vec![Vec::new()];
    }
    let low = target & target.wrapping_neg();
    let mut out = Vec::new();
    for rest in combos(target & !low, k - 1) {
        let block = low | rest;
        for mut tail in partitions(target & !block, k) {
            tail.insert(0, block);
            out.push(tail);
        }
    }
    out
}

pub fn absorbs(edges: &HashSet<u64>, k: usize, s: u64, q: u64) -> bool {
    s & q == 0 && has_perfect_matching(edges, k, s) && has_perfect_matching(edges, k, s | q)
}

pub fn is_valid_perfect(edges: &HashSet<u64>, n: usize, matching: &[u64]) -> bool {
    let mut covered = 0u64;
    for &e in matching {
        if !edges.contains(&e) || e & covered != 0 {
            return false;
        }
        covered |= e;
    }
    covered == full(n)
}
