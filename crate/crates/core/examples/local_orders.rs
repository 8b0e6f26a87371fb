//! Unit indices of `O_F + w^c O_E`, formula against enumeration.

use split_hecke::orders::{bruteforce_unit_index, galois_degree, unit_index, LocalOrderParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 3, 5] {
        for eps in [1, -1] {
            let row: Vec<String> = (0..=3)
                .map(|c| {
                    let f = unit_index(LocalOrderParams::new(q, eps, c)?);
                    let b = bruteforce_unit_index(q, eps, c)?;
                    Ok(format!("{f}/{b}"))
                })
                .collect::<Result<_, split_hecke::Error>>()?;
            println!("q={q} eps={eps:+}: {}", row.join(" "));
        }
    }
    println!("degree r=0 split q=5 u0=2: {}", galois_degree(5, 1, 0, 2)?);
    Ok(())
}
