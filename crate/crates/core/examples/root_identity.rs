//! The Hecke polynomial kills `U` on `[1]`.
//!
//! ```text
//! cargo run --release --example root_identity -- 2 2
//! ```

use split_hecke::congruence::check_root_identity;
use split_hecke::u_operator::DEFAULT_CAP;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let q: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let r = check_root_identity(n, q, DEFAULT_CAP);
    println!("{}", r.to_json());
    Ok(())
}
