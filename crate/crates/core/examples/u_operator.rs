//! Powers of the Iwahori `U`-operator on `[1]`, directly and by iteration.

use split_hecke::coset::base_class;
use split_hecke::u_operator::{u_power_apply, u_step, UConfig, DEFAULT_CAP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, q) = (2, 2);
    let mut x = base_class(n, q);
    for k in 1..=3 {
        x = u_step(&x, n, q, DEFAULT_CAP)?;
        let direct = u_power_apply(&UConfig::new(n, q, k)?, DEFAULT_CAP)?;
        println!("U^{k} [1]: {} cosets (expected {}), iteration agrees {}", direct.len(), UConfig::new(n, q, k)?.rep_count(), x == direct);
    }
    Ok(())
}
