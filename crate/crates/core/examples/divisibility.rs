//! Divisibility of `phi_0((U^k - q^{k(n-1)} Frob^k)[1])` over a small grid.

use split_hecke::congruence::{check_divisibility_lemma, divisibility_difference};
use split_hecke::u_operator::DEFAULT_CAP;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, q, k) in [(1, 3, 1), (1, 5, 2), (2, 3, 1), (2, 3, 2)] {
        println!("{}", check_divisibility_lemma(n, q, k, DEFAULT_CAP).summary_line());
    }
    let (_, diff) = divisibility_difference(1, 3, 1, DEFAULT_CAP)?;
    for (key, c) in diff.iter() {
        println!("  n=1 q=3 k=1: {c} * {key}");
    }
    Ok(())
}
