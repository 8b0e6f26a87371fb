//! Brute-force Satake transforms of the minuscule generators.

use split_hecke::coset::MinusculeCochar;
use split_hecke::satake::{satake_transform_bruteforce, verify_dictionary, weight_box};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = 2;
    let lambda = MinusculeCochar::new(3, 1)?;
    for nu in weight_box(3, -1, 2, 1) {
        let c = satake_transform_bruteforce(lambda, &nu, q)?;
        if !c.is_empty() {
            println!("nu = {nu:?}: {c:?} (s-exponent -> coefficient)");
        }
    }
    for (n, q) in [(1, 2), (1, 3), (2, 2)] {
        println!("{}", verify_dictionary(n, q).summary_line());
    }
    Ok(())
}
