//! The congruence `P(Frob) [1] = 0 mod q^{n-1}(q-1)` for every variant and level.

use split_hecke::congruence::{check_congruence_theorem, Variant};
use split_hecke::orbit::Level;

fn main() {
    println!("{:>2} {:>2} {:>6} {:>5}  status", "n", "q", "poly", "level");
    for (n, q) in [(1, 3), (1, 5), (2, 2), (2, 3)] {
        for variant in [Variant::Plain, Variant::Tilde] {
            for level in [Level::HDer, Level::H0] {
                let r = check_congruence_theorem(n, q, variant, level);
                println!("{n:>2} {q:>2} {:>6} {:>5}  {}", variant.name(), level.name(), r.status);
            }
        }
    }
}
