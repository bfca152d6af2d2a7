//! Exact perfect-matching search against the randomized greedy matcher on
//! seeded random 3-graphs.

use hyperthresh::matching::{solve, SolveOutcome, SolverConfig};
use hyperthresh::{max_matching_greedy, verify_matching, Hypergraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperthresh::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [0.05, 0.1, 0.2, 0.4] {
        let h = Hypergraph::random(15, 3, p, &mut rng)?;
        let greedy = max_matching_greedy(&h, 0);
        let (outcome, stats) = solve(&h, SolverConfig::default())?;
        let exact = match &outcome {
            SolveOutcome::Found(m) => {
                assert!(verify_matching(&h, m, true).is_valid());
                format!("perfect ({} edges)", m.len())
            }
            SolveOutcome::Absent => "none".to_string(),
            SolveOutcome::Aborted => "aborted".to_string(),
        };
        println!("p = {p:.2}: {:>3} edges, greedy {} edges, exact {exact} after {} nodes", h.edge_count(), greedy.len(), stats.nodes);
    }
    Ok(())
}
