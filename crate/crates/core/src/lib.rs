pub mod error;
pub mod field;
pub mod matrix;
pub mod coset;
pub mod orbit;
pub mod sym;
pub mod hecke_poly;
pub mod u_operator;
pub mod report;
pub mod congruence;
pub mod satake;
pub mod orders;
pub mod suite;

pub use error::{Error, Result};
pub use field::{FieldElem, LaurentPoly, ResidueField, Valuation};
