//! Cartan invariants, coset keys and the double coset `K lambda_k K / K`.
//!
//! ```text
//! cargo run --example cosets -- 3 2
//! ```

use std::collections::BTreeSet;

use split_hecke::coset::{decompose_double_coset, decompose_double_coset_bfs, gaussian_binomial, MinusculeCochar};
use split_hecke::matrix::{cartan_invariants, coset_key};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let m: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let q: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    for k in 1..=m {
        let lambda = MinusculeCochar::new(m, k)?;
        let reps = decompose_double_coset(lambda, q);
        let keys: BTreeSet<_> = reps.iter().map(coset_key).collect::<Result<_, _>>()?;
        let bfs: BTreeSet<_> = decompose_double_coset_bfs(lambda, q)?.into_iter().collect();
        println!(
            "k={k}: {} cosets, bfs {}, gaussian {}, agree {}",
            keys.len(),
            bfs.len(),
            gaussian_binomial(m as u32, k as u32, q as u64),
            keys == bfs
        );
        if let Some(g) = reps.last() {
            println!("  sample representative cartan {:?}, key {}", cartan_invariants(g)?, coset_key(g)?);
        }
    }
    Ok(())
}
