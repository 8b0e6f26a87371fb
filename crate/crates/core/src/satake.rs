//! Brute-force Satake transform of minuscule generators, used to check the
//! dictionary `T_{k,V} <-> s^{k(n+1-k)} e_k`, `T_{k,W} <-> s^{k(n-k)} e_k`.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::coset::{gaussian_binomial, Factor, MinusculeCochar};
use crate::error::{Error, Result};
use crate::field::LaurentPoly;
use crate::hecke_poly::SLaurent;
use crate::matrix::{cartan_invariants, Mat};
use crate::report::Report;

/// Enumeration budget for one transform coefficient.
pub const SATAKE_CAP: u64 = 2_000_000;

/// Exponent `e` with `delta_B(diag(w^{a_j})) = s^e`, i.e. `e = -2 sum_j (m+1-2j) a_j`.
pub fn modulus_function(a: &[i64]) -> i64 {
    let m = a.len() as i64;
    -2 * a.iter().enumerate().map(|(j, x)| (m - 1 - 2 * j as i64) * x).sum::<i64>()
}

/// `N s^e` rewritten with `q`-powers of `N` absorbed into `s^2`.
pub fn normalize_s(count: u128, e: i64, q: u32) -> SLaurent {
    let mut out = SLaurent::new();
    if count == 0 {
        return out;
    }
    let (mut n, mut e) = (count, e);
    while n % q as u128 == 0 {
        n /= q as u128;
        e += 2;
    }
    out.insert(e, n as i128);
    out
}

/// Per-entry support bound `B = (max lambda - min lambda) + max |nu|`.
pub fn entry_bound(lambda: MinusculeCochar, nu: &[i64]) -> u32 {
    let spread = if lambda.k == lambda.m { 0 } else { 1 };
    spread + nu.iter().map(|x| x.unsigned_abs() as u32).max().unwrap_or(0)
}

/// Number of `u in U(F)/U(O)` with `nu(w) u in K lambda K`, together with the
/// exponent of `delta^{1/2}(nu(w))`.
pub fn satake_count(lambda: MinusculeCochar, nu: &[i64], q: u32, cap: u64) -> Result<(u128, i64)> {
    let m = lambda.m;
    if nu.len() != m {
        return Err(Error::Domain("nu has the wrong length".into()));
    }
    let half = modulus_function(nu) / 2;
    let target = lambda.exponents();
    if nu.iter().sum::<i64>() != lambda.k as i64 {
        return Ok((0, half));
    }
    let b = entry_bound(lambda, nu);
    let slots = m * (m - 1) / 2;
    let per = (q as u64).checked_pow(b).ok_or_else(|| Error::Resource("bound overflow".into()))?;
    let total = per
        .checked_pow(slots as u32)
        .filter(|t| *t <= cap)
        .ok_or_else(|| Error::Resource(format!("{per}^{slots} unipotent representatives exceed the cap {cap}")))?;
    let base = Mat::diag_pow(q, nu);
    let count = (0..total)
        .into_par_iter()
        .map(|code| -> Result<u128> {
            let mut u = Mat::identity(q, m);
            let mut c = code;
            for i in 0..m {
                for j in i + 1..m {
                    let mut digits = Vec::with_capacity(b as usize);
                    for _ in 0..b {
                        digits.push((c % q as u64) as u32);
                        c /= q as u64;
                    }
                    u.set(i, j, LaurentPoly::new(q, -(b as i64), digits).to_field());
                }
            }
            Ok((cartan_invariants(&base.mul(&u))? == target) as u128)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok((count, half))
}

/// `c_nu` of the Satake transform of `1_{K lambda K}` as an `s`-Laurent polynomial.
pub fn satake_transform_bruteforce(lambda: MinusculeCochar, nu: &[i64], q: u32) -> Result<SLaurent> {
    let (count, half) = satake_count(lambda, nu, q, SATAKE_CAP)?;
    Ok(normalize_s(count, half, q))
}

/// All integer vectors of length `m` with entries in `lo..=hi` and sum `total`.
pub fn weight_box(m: usize, lo: i64, hi: i64, total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![lo; m];
    loop {
        if cur.iter().sum::<i64>() == total {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < m && cur[i] == hi {
            cur[i] = lo;
            i += 1;
        }
        if i == m {
            return out;
        }
        cur[i] += 1;
    }
}

fn is_weyl_conjugate(nu: &[i64], lambda: MinusculeCochar) -> bool {
    let mut s = nu.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s == lambda.exponents()
}

/// Checks every minuscule generator of both factors against the dictionary.
pub fn verify_dictionary(n: usize, q: u32) -> Report {
    let start = Instant::now();
    let mut r = Report::new("satake").param("n", n).param("q", q);
    if !(1..=2).contains(&n) {
        r.fail(json!("n must be 1 or 2"));
        return r.timed(start);
    }
    let mut checked = 0usize;
    let mut masses = BTreeMap::new();
    let run = |r: &mut Report, checked: &mut usize, masses: &mut BTreeMap<String, String>| -> Result<()> {
        for factor in [Factor::V, Factor::W] {
            let m = match factor {
                Factor::V => n + 1,
                Factor::W => n,
            };
            for k in 1..=m {
                let lambda = MinusculeCochar::new(m, k)?;
                let expected = normalize_s(1, (k * (m - k)) as i64, q);
                let mut mass = 0u128;
                for nu in weight_box(m, -1, 2, k as i64) {
                    let (count, half) = satake_count(lambda, &nu, q, SATAKE_CAP)?;
                    mass += count;
                    *checked += 1;
                    let got = normalize_s(count, half, q);
                    let want = if is_weyl_conjugate(&nu, lambda) { expected.clone() } else { SLaurent::new() };
                    if got != want {
                        r.fail(json!({
                            "factor": format!("{factor:?}"),
                            "k": k,
                            "nu": nu,
                            "got": format!("{got:?}"),
                            "expected": format!("{want:?}"),
                        }));
                        return Ok(());
                    }
                }
                let gb = gaussian_binomial(m as u32, k as u32, q as u64);
                masses.insert(format!("{factor:?}{k}"), format!("{mass}/{gb}"));
                if mass != gb {
                    r.fail(json!({"factor": format!("{factor:?}"), "k": k, "mass": mass.to_string(), "double_coset_size": gb.to_string()}));
                    return Ok(());
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run(&mut r, &mut checked, &mut masses) {
        r.absorb_error(&e);
    }
    r.count("weights_checked", checked);
    r.count("mass_vs_double_coset", json!(masses));
    r.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus_function(&[0, 0, 0]), 0);
        assert_eq!(modulus_function(&[1, 0]), -2);
        assert_eq!(modulus_function(&[1, 1, 1]), 0);
    }

    #[test]
    fn gl2_transform() {
        let l = MinusculeCochar::new(2, 1).unwrap();
        assert_eq!(satake_transform_bruteforce(l, &[1, 0], 3).unwrap(), normalize_s(1, 1, 3));
        assert_eq!(satake_transform_bruteforce(l, &[0, 1], 3).unwrap(), normalize_s(1, 1, 3));
        assert!(satake_transform_bruteforce(l, &[2, -1], 3).unwrap().is_empty());
        let central = MinusculeCochar::new(2, 2).unwrap();
        assert_eq!(satake_transform_bruteforce(central, &[1, 1], 2).unwrap(), normalize_s(1, 0, 2));
    }

    #[test]
    fn weight_box_counts() {
        assert_eq!(weight_box(2, -1, 2, 1).len(), 4);
        assert_eq!(weight_box(1, 0, 0, 0), vec![vec![0]]);
    }
}
