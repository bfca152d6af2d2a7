//! The three-phase absorbing pipeline on a complete, a dense random and an
//! extremal hypergraph.

use hyperthresh::absorbing::{pm_via_absorption, PipelineParams};
use hyperthresh::extremal::{build, ExtremalSpec, Kind};
use hyperthresh::Hypergraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperthresh::Result<()> {
    let inputs = [
        ("K_18^3", Hypergraph::complete(18, 3)?),
        ("random p=0.5", Hypergraph::random(18, 3, 0.5, &mut ChaCha8Rng::seed_from_u64(1))?),
        ("odd(n=12, k=3, |A|=5)", build(&ExtremalSpec::canonical(12, 3, 5, Kind::Odd)?)),
    ];
    let params = PipelineParams { xi: 0.4, seed: 7, ..PipelineParams::default() };
    for (name, h) in inputs {
        let rep = pm_via_absorption(&h, params)?;
        println!(
            "{name}: {:?}; absorbing {} of cap {}, greedy {} leaving {}, absorption {:?}, fallback {:?}",
            rep.status,
            rep.absorbing.size,
            rep.absorbing.cap,
            rep.greedy.size,
            rep.greedy.leftover,
            rep.absorption.outcome,
            rep.fallback.map(|f| f.outcome),
        );
    }
    Ok(())
}
