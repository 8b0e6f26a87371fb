//! End-to-end verifiers: annihilation of `U` by the Hecke polynomial, the
//! divisibility lemma, the local congruence relation and the horizontal lift.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::One;
use serde_json::{json, Value};

use crate::coset::{base_class, coef, hecke_apply_combination, Coef, FormalSum};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::hecke_poly::{build_hecke_polynomial, SpecializedPoly};
use crate::matrix::{embed_iota, Mat, PairKey};
use crate::orbit::{group_by_h0, left_translate, project, trace_1_0, unit_classes, unit_translate, Level, RefinedKey};
use crate::report::{Report, Status};
use crate::u_operator::{first_row_unipotent, frob_power, s_k_element, u_power_apply, UConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Tilde,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Tilde => "tilde",
        }
    }
}

fn q_pow(q: u32, e: u32) -> i128 {
    (q as i128).pow(e)
}

fn specialized(n: usize, q: u32) -> Result<SpecializedPoly> {
    build_hecke_polynomial(n)?.specialize(q)
}

/// `sum_j A_j X^j (x_0)` where `powers[j] = X^j (x_0)`.
pub fn evaluate_hecke_poly(
    p: &SpecializedPoly,
    powers: &[FormalSum<PairKey>],
) -> Result<FormalSum<PairKey>> {
    if powers.len() < p.coeffs.len() {
        return Err(Error::Domain("not enough powers supplied".into()));
    }
    let mut out = FormalSum::new();
    for (j, combo) in p.coeffs.iter().enumerate() {
        if combo.is_empty() {
            continue;
        }
        out.add_assign(&hecke_apply_combination(combo, &powers[j], p.q)?);
    }
    Ok(out)
}

/// `Frob^k [1]` for `k = 0..=deg`.
pub fn frob_powers(n: usize, q: u32, deg: usize) -> Result<Vec<FormalSum<PairKey>>> {
    (0..=deg)
        .map(|k| Ok(FormalSum::single(frob_power(n, q, k as i64).key()?, Coef::one())))
        .collect()
}

/// `U^k [1]` for `k = 0..=deg`.
pub fn u_powers(n: usize, q: u32, deg: usize, cap: u64) -> Result<Vec<FormalSum<PairKey>>> {
    let total: u64 = (0..=deg as u32).map(|k| UConfig { n, q, k }.rep_count()).sum();
    if total > cap {
        return Err(Error::Resource(format!("{total} coset reductions exceed the cap {cap}")));
    }
    let mut out = vec![base_class(n, q)];
    for k in 1..=deg as u32 {
        out.push(u_power_apply(&UConfig::new(n, q, k)?, cap)?);
    }
    Ok(out)
}

fn coeff_json(c: &Coef) -> Value {
    if c.is_integer() {
        json!(c.numer().to_string())
    } else {
        json!(format!("{}/{}", c.numer(), c.denom()))
    }
}

/// First coefficient that is not an integer multiple of `d`.
pub fn first_non_divisible<K: Ord + Clone>(x: &FormalSum<K>, d: i128) -> Option<(K, Coef)> {
    x.iter()
        .find(|(_, c)| !c.is_integer() || c.numer() % d != 0)
        .map(|(k, c)| (k.clone(), *c))
}

/// `H_w(U) [1] = 0` in `Z[G/K]`.
pub fn check_root_identity(n: usize, q: u32, cap: u64) -> Report {
    let start = Instant::now();
    let mut r = Report::new("root").param("n", n).param("q", q);
    let run = || -> Result<(usize, FormalSum<PairKey>)> {
        let p = specialized(n, q)?;
        let powers = u_powers(n, q, p.coeffs.len() - 1, cap)?;
        let terms: usize = powers.iter().map(|x| x.len()).sum();
        Ok((terms, evaluate_hecke_poly(&p, &powers)?))
    };
    match run() {
        Ok((terms, total)) => {
            r.count("u_power_terms", terms);
            r.count("residual_terms", total.len());
            if let Some((k, c)) = total.iter().next() {
                r.fail(json!({"key": k.0.token() + " | " + &k.1.token(), "coefficient": coeff_json(c)}));
            }
        }
        Err(e) => r.absorb_error(&e),
    }
    r.timed(start)
}

/// `phi_0(U^k [1])` and `phi_0((U^k - q^{k(n-1)} Frob^k)[1])`.
pub fn divisibility_difference(
    n: usize,
    q: u32,
    k: u32,
    cap: u64,
) -> Result<(FormalSum<RefinedKey>, FormalSum<RefinedKey>)> {
    let u = project(&u_power_apply(&UConfig::new(n, q, k)?, cap)?, Level::H0, q)?;
    let scale = coef(q_pow(q, k * (n as u32 - 1)));
    let f = project(&FormalSum::single(frob_power(n, q, k as i64).key()?, scale), Level::H0, q)?;
    let diff = u.sub(&f);
    Ok((u, diff))
}

/// Every coefficient of `phi_0((U^k - q^{k(n-1)} Frob^k)[1])` is divisible by `q^{k(n-1)}(q-1)`.
///
/// Also checks the Frobenius coefficient `q^{k(n-1)}` and the total mass `q^{k(2n-1)}`.
pub fn check_divisibility_lemma(n: usize, q: u32, k: u32, cap: u64) -> Report {
    let start = Instant::now();
    let mut r = Report::new("divisibility").param("n", n).param("q", q).param("k", k);
    if k == 0 {
        r.fail(json!("k must be at least 1"));
        return r.timed(start);
    }
    let qpart = q_pow(q, k * (n as u32 - 1));
    let modulus = qpart * (q as i128 - 1);
    r.count("modulus", modulus.to_string());
    let run = |r: &mut Report| -> Result<()> {
        let (u, diff) = divisibility_difference(n, q, k, cap)?;
        let frob = crate::orbit::refined_key(&frob_power(n, q, k as i64), Level::H0)?;
        let mass = coef(UConfig { n, q, k }.rep_count() as i128);
        r.count("h0_classes", diff.len());
        r.count("reps", UConfig { n, q, k }.rep_count());
        r.count("frob_coefficient", coeff_json(&u.get(&frob)));
        r.count("mass", coeff_json(&u.mass()));
        if u.get(&frob) != coef(qpart) {
            r.fail(json!({"key": frob.token(), "coefficient": coeff_json(&u.get(&frob)), "reason": "Frobenius coefficient"}));
        } else if u.mass() != mass {
            r.fail(json!({"mass": coeff_json(&u.mass()), "reason": "total mass"}));
        } else if let Some((key, c)) = first_non_divisible(&diff, modulus) {
            r.fail(json!({"key": key.token(), "coefficient": coeff_json(&c), "modulus": modulus.to_string()}));
        } else if q == 2 {
            r.status = Status::PassVacuous;
        }
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

/// `P(Frob) phi_level([1])` with `P = H_w` or `H_w(q^{n-1} z)`.
pub fn frob_image(n: usize, q: u32, variant: Variant, level: Level) -> Result<FormalSum<RefinedKey>> {
    let mut p = specialized(n, q)?;
    if variant == Variant::Tilde {
        p = p.tilde();
    }
    let powers = frob_powers(n, q, p.coeffs.len() - 1)?;
    project(&evaluate_hecke_poly(&p, &powers)?, level, q)
}

/// Divisibility of `P(Frob) phi([1])` by `q^{n-1}(q-1)` at the requested level.
pub fn check_congruence_theorem(n: usize, q: u32, variant: Variant, level: Level) -> Report {
    let start = Instant::now();
    let mut r = Report::new("congruence")
        .param("n", n)
        .param("q", q)
        .param("variant", variant.name())
        .param("level", level.name());
    let modulus = q_pow(q, n as u32 - 1) * (q as i128 - 1);
    r.count("modulus", modulus.to_string());
    match frob_image(n, q, variant, level) {
        Ok(y) => {
            r.count("classes", y.len());
            let non_integral = y.iter().filter(|(_, c)| !c.is_integer()).count();
            r.count("non_integral", non_integral);
            let coprime_ok = y.iter().all(|(_, c)| c.is_integer() && c.numer() % (q as i128 - 1) == 0);
            let qpart_ok = y.iter().all(|(_, c)| c.is_integer() && c.numer() % q_pow(q, n as u32 - 1) == 0);
            r.count("divisible_by_q_minus_1", coprime_ok);
            r.count("divisible_by_q_power", qpart_ok);
            if let Some((key, c)) = first_non_divisible(&y, modulus) {
                r.fail(json!({"key": key.token(), "coefficient": coeff_json(&c), "modulus": modulus.to_string()}));
            } else if modulus == 1 {
                r.status = Status::PassVacuous;
            }
        }
        Err(e) => r.absorb_error(&e),
    }
    r.timed(start)
}

/// Builds `x` with `Tr_{1,0} x = H_w(Frob) phi([1])`, checking the identity exactly.
pub fn construct_horizontal_lift(n: usize, q: u32) -> (FormalSum<RefinedKey>, Report) {
    let start = Instant::now();
    let mut r = Report::new("lift").param("n", n).param("q", q);
    let mut x = FormalSum::new();
    let run = |x: &mut FormalSum<RefinedKey>, r: &mut Report| -> Result<()> {
        let y = frob_image(n, q, Variant::Plain, Level::HDer)?;
        r.count("target_terms", y.len());
        // invariance under H_0, including a non-constant unit
        let mut translates = vec![unit_translate(n, q, 1)];
        for lambda in 2..q {
            translates.push(unit_translate(n, q, lambda));
        }
        let mut d = vec![FieldElem::one(q); n];
        d[0] = FieldElem::one(q).add(&FieldElem::uniformizer_pow(q, 1));
        translates.push(crate::matrix::GroupElement::delta(&Mat::diag(q, &d)));
        for h in &translates {
            if left_translate(h, &y)? != y {
                r.fail(json!("target is not fixed by H_0"));
                return Ok(());
            }
        }
        let mut by_cond: BTreeMap<u32, usize> = BTreeMap::new();
        for (h0, members) in group_by_h0(&y) {
            let cond = h0.conductor();
            *by_cond.entry(cond).or_default() += 1;
            if cond == 0 {
                let (key, a) = &members[0];
                if !a.is_integer() || a.numer() % (q as i128 - 1) != 0 {
                    r.fail(json!({"key": key.token(), "coefficient": coeff_json(a), "reason": "conductor-0 coefficient not divisible by q-1"}));
                    return Ok(());
                }
                x.add_term(key.clone(), a / coef(q as i128 - 1));
                continue;
            }
            let expected = unit_classes(q, cond).len();
            let a = members[0].1;
            if members.len() != expected || members.iter().any(|(_, c)| *c != a) {
                r.fail(json!({"key": h0.token(), "reason": "coefficients vary along the H_0-orbit"}));
                return Ok(());
            }
            for u in unit_classes(q, cond) {
                if u[0] == 1 {
                    x.add_term(RefinedKey { unit: Some(u), ..h0.clone() }, a);
                }
            }
        }
        let conductors: BTreeMap<String, usize> = by_cond.into_iter().map(|(c, k)| (c.to_string(), k)).collect();
        r.count("h0_classes_by_conductor", json!(conductors));
        r.count("lift_terms", x.len());
        let tr = trace_1_0(x, n, q)?;
        if tr != y {
            let diff = tr.sub(&y);
            let (k, c) = diff.iter().next().map(|(k, c)| (k.token(), coeff_json(c))).unwrap();
            r.fail(json!({"key": k, "coefficient": c, "reason": "trace mismatch"}));
        }
        Ok(())
    };
    if let Err(e) = run(&mut x, &mut r) {
        r.absorb_error(&e);
    }
    (x, r.timed(start))
}

/// Output of the `epsilon`/`alpha` decomposition of a nonzero `c in S_k^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonAlpha {
    /// `epsilon_i = w^{ord c_i}`, or zero.
    pub epsilon: Vec<FieldElem>,
    /// `alpha(c)` reduced modulo `w^k`.
    pub alpha: FieldElem,
}

fn tilde(x: &FieldElem) -> FieldElem {
    if x.is_zero() {
        FieldElem::one(x.q())
    } else {
        x.unit_part()
    }
}

/// Verifies `iota(c_bar) u_{k,c} c_under = diag(alpha, 1, ..., 1) u_{k,epsilon}` exactly.
pub fn epsilon_alpha_decompose(c: &[FieldElem], q: u32, k: u32) -> Result<EpsilonAlpha> {
    let n = c.len();
    if c.iter().all(|x| x.is_zero()) {
        return Err(Error::Domain("c must be nonzero".into()));
    }
    let t: Vec<FieldElem> = c.iter().map(tilde).collect();
    let tn = &t[n - 1];
    let tn_inv = tn.inv()?;
    let mut prod_inv = FieldElem::one(q);
    for ti in &t[..n - 1] {
        prod_inv = prod_inv.mul(&ti.inv()?);
    }
    let mut bar = vec![crate::field::pow(tn, n as i64 - 1)?.mul(&prod_inv)];
    for ti in &t[..n - 1] {
        bar.push(tn_inv.mul(ti));
    }
    let mut under = vec![tn.clone()];
    for ti in &t[..n - 1] {
        under.push(tn.mul(&ti.inv()?));
    }
    under.push(FieldElem::one(q));
    let alpha = crate::field::pow(tn, n as i64)?.mul(&prod_inv);
    let epsilon: Vec<FieldElem> = c
        .iter()
        .map(|x| match x.ord() {
            None => FieldElem::zero(q),
            Some(v) => FieldElem::uniformizer_pow(q, v),
        })
        .collect();
    let c_bar = Mat::diag(q, &bar);
    if !c_bar.det().is_one() {
        return Err(Error::Internal("c_bar is not in SL_n".into()));
    }
    let lhs = embed_iota(&c_bar).mul(&first_row_unipotent(q, c)).mul(&Mat::diag(q, &under));
    let mut d = vec![FieldElem::one(q); n + 1];
    d[0] = alpha.clone();
    let rhs = Mat::diag(q, &d).mul(&first_row_unipotent(q, &epsilon));
    if lhs != rhs {
        return Err(Error::Internal(format!("decomposition identity fails for c = {c:?}")));
    }
    Ok(EpsilonAlpha { epsilon, alpha: alpha.reduce_mod(k as i64) })
}

/// `prod_{eps_i != 0} (q^{k - ord eps_i} - q^{k - 1 - ord eps_i})`; `None` marks `eps_i = 0`.
pub fn count_j(eps_ords: &[Option<u32>], k: u32, q: u32) -> Result<u128> {
    if eps_ords.iter().all(|o| o.is_none()) {
        return Err(Error::Domain("epsilon must be nonzero".into()));
    }
    let q = q as u128;
    let mut acc = 1u128;
    for o in eps_ords.iter().flatten() {
        if *o >= k {
            return Err(Error::Domain(format!("ord {o} not below k = {k}")));
        }
        acc *= q.pow(k - o) - q.pow(k - 1 - o);
    }
    Ok(acc)
}

/// Number of `c in S_k^n` with `epsilon(c) = epsilon`, by enumeration.
pub fn count_j_bruteforce(eps_ords: &[Option<u32>], k: u32, q: u32) -> u128 {
    let n = eps_ords.len();
    let per = (q as u64).pow(k);
    let total = per.pow(n as u32);
    let mut count = 0u128;
    for code in 0..total {
        let mut c = code;
        let mut ok = true;
        for o in eps_ords {
            let x = s_k_element(q, k, c % per);
            c /= per;
            if x.ord().map(|v| v as u32) != *o {
                ok = false;
                break;
            }
        }
        count += ok as u128;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::u_operator::DEFAULT_CAP;

    #[test]
    fn epsilon_alpha_examples() {
        let q = 3;
        let u = FieldElem::constant(q, 2).add(&FieldElem::uniformizer_pow(q, 1));
        let d = epsilon_alpha_decompose(std::slice::from_ref(&u), q, 2).unwrap();
        assert_eq!(d.epsilon, vec![FieldElem::one(q)]);
        assert_eq!(d.alpha, u);
        let c = [FieldElem::uniformizer_pow(q, 1), FieldElem::one(q)];
        let d = epsilon_alpha_decompose(&c, q, 2).unwrap();
        assert_eq!(d.epsilon, c.to_vec());
    }

    #[test]
    fn count_j_examples() {
        assert_eq!(count_j(&[Some(0)], 1, 3).unwrap(), 2);
        assert_eq!(count_j(&[Some(1), Some(0)], 2, 2).unwrap(), 2);
        assert_eq!(count_j_bruteforce(&[Some(1), Some(0)], 2, 2), 2);
    }

    #[test]
    fn n1_projection_of_u() {
        let u = u_power_apply(&UConfig::new(1, 3, 1).unwrap(), DEFAULT_CAP).unwrap();
        let p = project(&u, Level::H0, 3).unwrap();
        assert_eq!(p.len(), 2);
        let frob = crate::orbit::refined_key(&frob_power(1, 3, 1), Level::H0).unwrap();
        assert_eq!(p.get(&frob), coef(1));
        assert_eq!(p.mass(), coef(3));
    }

    #[test]
    fn small_root_identity() {
        assert_eq!(check_root_identity(1, 2, DEFAULT_CAP).status, Status::Pass);
    }
}
