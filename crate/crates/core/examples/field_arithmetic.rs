//! Exact arithmetic in `F_q((w))`: parsing, valuations, inverses and truncation.

use split_hecke::FieldElem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = 3;
    let x = FieldElem::parse(q, "(1+2*w)/(w^2)")?;
    let y = FieldElem::parse(q, "1+w")?;
    println!("x = {x}, ord {:?}", x.ord());
    println!("y = {y}, unit {}", y.is_unit());
    let inv = y.inv()?;
    println!("1/y = {inv}");
    println!("1/y mod w^5 = {}", inv.series_truncate(5));
    println!("x*y = {}", x.mul(&y));
    println!("x/y = {}", x.div(&y)?);
    println!("unit part of x = {}", x.unit_part());
    Ok(())
}
