//! Hecke operators acting on the base class `[1]` of `Z[G/K]`.

use split_hecke::coset::{apply_generator, base_class, hecke_apply, Factor, TMonomial};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, q) = (1, 3);
    let x = base_class(n, q);
    let t1v = apply_generator(Factor::V, 1, &x, n, q)?;
    println!("T1V [1]: {} cosets, mass {}", t1v.len(), t1v.mass());
    let t1w_t1v = apply_generator(Factor::W, 1, &t1v, n, q)?;
    let t1v_t1w = apply_generator(Factor::V, 1, &apply_generator(Factor::W, 1, &x, n, q)?, n, q)?;
    println!("T1W T1V [1] = T1V T1W [1]: {}", t1w_t1v == t1v_t1w);
    let mono = TMonomial::generator(n, Factor::V, 1).mul(&TMonomial::generator(n, Factor::W, 1));
    let y = hecke_apply(&mono, &x, q)?;
    println!("{mono} [1]: {} cosets, mass {}", y.len(), y.mass());
    for (key, c) in y.iter().take(4) {
        println!("  {c} * ({} | {})", key.0, key.1);
    }
    Ok(())
}
