//! Every member of the parity-obstructed family for (n, k) = (12, 3), with
//! its parity certificate and the exact solver's confirmation.

use hyperthresh::extremal::{build, hext_family, no_pm_certificate};
use hyperthresh::find_perfect_matching;

fn main() -> hyperthresh::Result<()> {
    let (n, k) = (12, 3);
    for spec in hext_family(n, k)? {
        let h = build(&spec);
        let cert = no_pm_certificate(&spec, n / k)?;
        let solver = find_perfect_matching(&h)?;
        println!("{spec}: {} edges, solver finds {:?}", h.edge_count(), solver.map(|m| m.len()));
        println!("    {}", cert.conclusion);
    }
    Ok(())
}
