//! Codegree thresholds of the extremal family next to the closed form.

use hyperthresh::extremal::threshold;

fn main() -> hyperthresh::Result<()> {
    println!("{:>3} {:>2} {:>6} {:>8}  witnesses", "n", "k", "delta", "formula");
    for k in 3..=5 {
        for n in (3 * k..=30).step_by(k) {
            let rep = threshold(n, k, k - 1)?;
            let formula = rep.formula_k_minus_1.map(|f| f.to_string()).unwrap_or_default();
            let witnesses: Vec<String> = rep.witnesses.iter().map(|w| format!("{}/{}", w.kind, w.size_a)).collect();
            println!("{n:>3} {k:>2} {:>6} {formula:>8}  {}", rep.delta, witnesses.join(" "));
        }
    }
    Ok(())
}
