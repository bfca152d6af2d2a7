//! Structure diagnostics of a lightly perturbed extremal hypergraph: the
//! derived partition, its model distance and the vertex classes.

use hyperthresh::auxgraph::{structure_report, ColoringChoice};
use hyperthresh::extremal::{build, ExtremalSpec, Kind};
use hyperthresh::VertexSet;

fn main() -> hyperthresh::Result<()> {
    let mut h = build(&ExtremalSpec::canonical(10, 3, 5, Kind::Odd)?);
    for e in [[0, 1, 5], [2, 6, 7], [0, 1, 2]] {
        h = h.toggled(VertexSet::from_indices(e)?)?;
    }
    let report = structure_report(&h, 0.05, 0.01, ColoringChoice::Refined)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
