//! Distance from a perturbed hypergraph to the nearest family member, by
//! exhaustive search over bipartitions and by local search.

use hyperthresh::extremal::{build, closeness_min, ExtremalSpec, Kind, SearchMode};
use hyperthresh::VertexSet;

fn main() -> hyperthresh::Result<()> {
    let mut h = build(&ExtremalSpec::canonical(12, 3, 6, Kind::Even)?);
    for e in [[0, 1, 2], [3, 7, 9], [6, 7, 8], [1, 10, 11]] {
        h = h.toggled(VertexSet::from_indices(e)?)?;
    }
    for mode in [SearchMode::Exact, SearchMode::Heuristic] {
        let fit = closeness_min(&h, Kind::Even, mode)?;
        println!("{mode:?}: A = {}, {} edits", fit.a, fit.edits);
    }
    Ok(())
}
