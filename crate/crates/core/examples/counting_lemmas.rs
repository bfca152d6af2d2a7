//! The counting checks on a random graph and the parity-split sums with
//! their asymptotic envelope.

use hyperthresh::lemmas::{
    df_density_margin, evensum_asymptotic_check, kk_clique_bound_check, parity_split_sums, t_profile,
    verify_profile_identities,
};
use hyperthresh::Hypergraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperthresh::Result<()> {
    let f = Hypergraph::random(12, 2, 0.4, &mut ChaCha8Rng::seed_from_u64(9))?;
    println!("t-profile {:?}", t_profile(&f).t);
    let mut checks = verify_profile_identities(&f).to_vec();
    checks.push(kk_clique_bound_check(&f));
    checks.push(df_density_margin(&f));
    for c in checks {
        println!("{:<26} {:>10.3} vs {:>10.3}  {:?}", c.check, c.lhs, c.rhs, c.verdict);
    }
    let s = parity_split_sums(24, 8, 4)?;
    println!("a=24 b=8 r=4: even {} odd {}", s.even_sum, s.odd_sum);
    for n in [16, 32, 64] {
        let [even, odd] = evensum_asymptotic_check(0.75, 4, n)?;
        println!("c=3/4 r=4 n={n}: error {:.1} / {:.1} within {:.1}", even.lhs, odd.lhs, even.rhs);
    }
    Ok(())
}
