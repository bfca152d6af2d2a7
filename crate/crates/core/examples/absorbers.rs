//! Structured k- and 2k-absorbers of one 3-set in a dense random 3-graph,
//! each re-checked with the generic absorption test.

use hyperthresh::absorbing::{
    enumerate_over_all_splits, is_absorbing, k_absorber_multiplicity_bound, two_k_absorber_multiplicity_bound,
};
use hyperthresh::{Hypergraph, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperthresh::Result<()> {
    let h = Hypergraph::random(12, 3, 0.6, &mut ChaCha8Rng::seed_from_u64(3))?;
    let q = VertexSet::from_indices([0, 1, 2])?;
    for (two_k, bound) in [(false, k_absorber_multiplicity_bound(3)), (true, two_k_absorber_multiplicity_bound(3))] {
        let list = enumerate_over_all_splits(&h, q, two_k, None)?;
        let sound = list.sets.iter().all(|&s| matches!(is_absorbing(&h, s, q), Ok(Some(_))));
        println!(
            "{} absorbers of {q}: {} sets from {} labeled structures, max multiplicity {} (bound {bound}), all sound: {sound}",
            if two_k { "2k" } else { "k" },
            list.sets.len(),
            list.labeled_count,
            list.max_multiplicity,
        );
    }
    Ok(())
}
