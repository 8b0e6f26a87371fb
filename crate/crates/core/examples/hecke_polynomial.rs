//! Print the Hecke polynomial for a given `n` in the fixture format.
//!
//! ```text
//! cargo run --example hecke_polynomial -- 2
//! ```

use split_hecke::hecke_poly::build_hecke_polynomial;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2);
    let h = build_hecke_polynomial(n)?;
    print!("{}", h.to_fixture());
    eprintln!("degree {}, monic {}, even s-powers {}", h.degree(), h.is_monic(), h.has_even_s_powers());
    Ok(())
}
