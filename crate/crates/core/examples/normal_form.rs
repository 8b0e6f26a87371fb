//! Normal forms in `H \ G / K`, conductors and refined class keys.

use split_hecke::matrix::{GroupElement, Mat};
use split_hecke::orbit::{class_invariant, conductor_of, normal_form, refined_key_from, stabilizer_det, verify_witness, Level};
use split_hecke::FieldElem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = 3;
    let w = |k| FieldElem::uniformizer_pow(q, k);
    let one = FieldElem::one(q);
    let zero = FieldElem::zero(q);
    let samples = [
        GroupElement::identity(q, 1),
        GroupElement::new(Mat::from_rows(q, vec![vec![w(1), one.clone()], vec![zero.clone(), one.clone()]])?, Mat::diag_pow(q, &[1]))?,
        GroupElement::new(Mat::diag_pow(q, &[2, -1, 0]), Mat::diag_pow(q, &[1, 0]))?,
    ];
    for g in &samples {
        let (nf, wit) = normal_form(g)?;
        println!("normal form {nf}");
        println!("  invariant {:?}", class_invariant(&nf));
        println!("  stabilizer det {:?}, conductor {}", stabilizer_det(&nf.a, &nf.b), conductor_of(&nf));
        println!("  witness ok {}", verify_witness(g, &nf, &wit)?);
        println!("  hder key {}", refined_key_from(nf, &wit, Level::HDer));
    }
    Ok(())
}
