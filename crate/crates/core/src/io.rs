//! Text and JSON codecs for hypergraphs and absorber listings.
//!
//! Text format: a header line `k n m`, then `m` lines of `k` space-separated
//! vertex indices in increasing order, with the lines themselves in
//! lexicographic order. Lines starting with `#` are comments. Serializing a
//! parsed file reproduces it byte for byte (comments aside).

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vset::VertexSet;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| parse_err(line_no, format!("not an index: {tok:?}"))))
        .collect()
}

/// A uniform family of vertex sets as read from the text format. Hypergraph
/// files and absorber blocks share this layout; `size` is the set size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub size: usize,
    pub n: usize,
    pub sets: Vec<VertexSet>,
}

fn parse_family<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<SetFamily> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut sets = Vec::new();
    let mut last_line = 0;
    for (line_no, raw) in lines {
        last_line = line_no;
        let line = raw.trim_end_matches('\r');
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let nums = parse_numbers(line_no, line)?;
        match header {
            None => {
                let [size, n, m] = nums[..] else {
                    return Err(parse_err(line_no, "header must be `k n m`"));
                };
                header = Some((size, n, m));
            }
            Some((size, n, _)) => {
                if nums.len() != size {
                    return Err(parse_err(line_no, format!("expected {size} indices, found {}", nums.len())));
                }
                if let Some(&v) = nums.iter().find(|&&v| v >= n) {
                    return Err(parse_err(line_no, format!("vertex {v} outside [0, {n})")));
                }
                let s = VertexSet::from_sorted_indices(&nums).map_err(|e| parse_err(line_no, e.to_string()))?;
                if let Some(&prev) = sets.last() {
                    if s <= prev {
                        return Err(parse_err(line_no, "lines are not in strictly increasing lexicographic order"));
                    }
                }
                sets.push(s);
            }
        }
    }
    let Some((size, n, m)) = header else {
        return Err(parse_err(last_line, "missing `k n m` header"));
    };
    if sets.len() != m {
        return Err(parse_err(last_line, format!("header announces {m} lines, found {}", sets.len())));
    }
    Ok(SetFamily { size, n, sets })
}

fn write_family(out: &mut String, size: usize, n: usize, sets: &[VertexSet]) {
    let _ = writeln!(out, "{size} {n} {}", sets.len());
    for s in sets {
        let _ = writeln!(out, "{s}");
    }
}

pub fn parse_text(text: &str) -> Result<Hypergraph> {
    let fam = parse_family(text.lines().enumerate().map(|(i, l)| (i + 1, l)))?;
    Hypergraph::new(fam.n, fam.size, fam.sets).map_err(|e| parse_err(1, e.to_string()))
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = String::new();
    write_family(&mut out, h.k(), h.n(), h.edges());
    out
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    k: usize,
    n: usize,
    edges: Vec<VertexSet>,
}

pub fn parse_json(text: &str) -> Result<Hypergraph> {
    let raw: HypergraphJson =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if raw.edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(parse_err(1, "edges are not in strictly increasing lexicographic order"));
    }
    Hypergraph::new(raw.n, raw.k, raw.edges).map_err(|e| parse_err(1, e.to_string()))
}

pub fn to_json(h: &Hypergraph) -> String {
    let raw = HypergraphJson { k: h.k(), n: h.n(), edges: h.edges().to_vec() };
    serde_json::to_string(&raw).expect("hypergraph JSON")
}

/// Parses either format, deciding by the first non-blank character.
pub fn parse_any(text: &str) -> Result<Hypergraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

const ABSORBER_TAG: &str = "# absorber-for:";

/// One absorber listing: the absorbed set and its absorbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorberBlock {
    pub target: VertexSet,
    pub family: SetFamily,
}

/// Appends `# absorber-for: <Q>` followed by the absorbers in the
/// hypergraph text layout (header `|S| n m`, one absorber per line).
pub fn write_absorber_block(out: &mut String, n: usize, target: VertexSet, size: usize, absorbers: &[VertexSet]) {
    let mut sorted = absorbers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let _ = writeln!(out, "{ABSORBER_TAG} {target}");
    write_family(out, size, n, &sorted);
}

pub fn parse_absorber_stream(text: &str) -> Result<Vec<AbsorberBlock>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let starts: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| l.starts_with(ABSORBER_TAG))
        .map(|(i, _)| i)
        .collect();
    if let Some(&(line_no, l)) = lines.iter().find(|(_, l)| !l.trim().is_empty()) {
        if !l.starts_with(ABSORBER_TAG) {
            return Err(parse_err(line_no, "absorber stream must start with an absorber-for header"));
        }
    }
    let mut blocks = Vec::new();
    for (bi, &start) in starts.iter().enumerate() {
        let end = starts.get(bi + 1).copied().unwrap_or(lines.len());
        let (line_no, tag_line) = lines[start];
        let nums = parse_numbers(line_no, &tag_line[ABSORBER_TAG.len()..])?;
        let target = VertexSet::from_sorted_indices(&nums).map_err(|e| parse_err(line_no, e.to_string()))?;
        let family = parse_family(lines[start + 1..end].iter().copied())?;
        blocks.push(AbsorberBlock { target, family });
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn text_layout_is_exact() {
        let h = Hypergraph::complete(4, 3).unwrap();
        assert_eq!(to_text(&h), "3 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n");
        assert_eq!(to_json(&h), r#"{"k":3,"n":4,"edges":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#);
    }

    #[test]
    fn comments_are_ignored() {
        let h = parse_text("# generated\n2 3 1\n# mid\n0 2\n").unwrap();
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "3 4\n",
            "3 4 1\n0 1\n",
            "3 4 1\n0 2 1\n",
            "3 4 2\n0 1 3\n0 1 2\n",
            "3 4 1\n0 1 4\n",
            "3 4 2\n0 1 2\n",
            "3 4 1\n0 1 x\n",
            "3 4 2\n0 1 2\n0 1 2\n",
        ] {
            assert!(matches!(parse_text(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
        assert!(parse_json(r#"{"k":2,"n":3,"edges":[[1,2],[0,1]]}"#).is_err());
        assert!(parse_json(r#"{"k":2,"n":3,"edges":[[1,0]]}"#).is_err());
    }

    #[test]
    fn absorber_stream_round_trip() {
        let q = VertexSet::from_indices([0, 1, 2]).unwrap();
        let a = VertexSet::from_indices([3, 4, 5]).unwrap();
        let b = VertexSet::from_indices([3, 4, 6]).unwrap();
        let mut out = String::new();
        write_absorber_block(&mut out, 9, q, 3, &[b, a]);
        write_absorber_block(&mut out, 9, a, 6, &[]);
        assert!(out.starts_with("# absorber-for: 0 1 2\n3 9 2\n3 4 5\n3 4 6\n"));
        let blocks = parse_absorber_stream(&out).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].target, q);
        assert_eq!(blocks[0].family.sets, vec![a, b]);
        assert_eq!(blocks[1].family.size, 6);
        assert!(blocks[1].family.sets.is_empty());
        // the first block alone is a valid hypergraph file
        let first = out.split("# absorber-for: 3 4 5").next().unwrap();
        assert_eq!(parse_text(first).unwrap().edge_count(), 2);
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(k in 1usize..4, extra in 0usize..6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = Hypergraph::random(k + extra, k, 0.4, &mut rng).unwrap();
            let text = to_text(&h);
            let back = parse_text(&text).unwrap();
            prop_assert_eq!(&back, &h);
            prop_assert_eq!(to_text(&back), text);
            let json = to_json(&h);
            prop_assert_eq!(parse_any(&json).unwrap(), h);
        }
    }
}
