//! The Iwahori `U`-operator attached to `mu = Delta(diag(t, 1, ..., 1))`.
//!
//! `U^k [1] = sum (u_{k,a}, v_{k,b}) Frob^k [1]` over `a in S_k^n`, `b in S_k^{n-1}`,
//! where `S_k` is the set of polynomials in `w` of degree `< k` with digits in `0..q`.

use rayon::prelude::*;

use crate::coset::{coef, FormalSum};
use crate::error::{Error, Result};
use crate::field::{FieldElem, LaurentPoly};
use crate::matrix::{GroupElement, Mat, PairKey};

/// Default bound on the number of group reductions a single computation may perform.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UConfig {
    pub n: usize,
    pub q: u32,
    pub k: u32,
}

impl UConfig {
    pub fn new(n: usize, q: u32, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        crate::field::ResidueField::new(q)?;
        Ok(UConfig { n, q, k })
    }

    /// `q^{k(2n-1)}`.
    pub fn rep_count(&self) -> u64 {
        (self.q as u64).saturating_pow(self.k * (2 * self.n as u32 - 1))
    }
}

/// `Frob^k = Delta(diag(w^k, 1, ..., 1))`.
pub fn frob_power(n: usize, q: u32, k: i64) -> GroupElement {
    let mut d = vec![0; n];
    d[0] = k;
    GroupElement::delta(&Mat::diag_pow(q, &d))
}

/// The `index`-th element of `S_k` (base-`q` digits of `index`).
pub fn s_k_element(q: u32, k: u32, index: u64) -> FieldElem {
    let mut c = index;
    let digits: Vec<u32> = (0..k)
        .map(|_| {
            let d = (c % q as u64) as u32;
            c /= q as u64;
            d
        })
        .collect();
    LaurentPoly::new(q, 0, digits).to_field()
}

/// Identity matrix of size `m` with first row `(1, entries...)`.
pub fn first_row_unipotent(q: u32, entries: &[FieldElem]) -> Mat {
    let m = entries.len() + 1;
    let mut g = Mat::identity(q, m);
    for (j, e) in entries.iter().enumerate() {
        g.set(0, j + 1, e.clone());
    }
    g
}

/// `(u_{k,a}, v_{k,b})` for the `index`-th pair in a fixed enumeration order.
pub fn u_rep(cfg: &UConfig, index: u64) -> GroupElement {
    let per = (cfg.q as u64).pow(cfg.k);
    let mut c = index;
    let mut next = || {
        let e = s_k_element(cfg.q, cfg.k, c % per);
        c /= per;
        e
    };
    let a: Vec<FieldElem> = (0..cfg.n).map(|_| next()).collect();
    let b: Vec<FieldElem> = (0..cfg.n - 1).map(|_| next()).collect();
    GroupElement { g1: first_row_unipotent(cfg.q, &a), g2: first_row_unipotent(cfg.q, &b) }
}

fn check_cap(count: u64, cap: u64) -> Result<()> {
    if count > cap {
        return Err(Error::Resource(format!("{count} group reductions exceed the cap {cap}")));
    }
    Ok(())
}

/// All `q^{k(2n-1)}` representatives `(u_{k,a}, v_{k,b})`.
pub fn u_power_reps(cfg: &UConfig, cap: u64) -> Result<Vec<GroupElement>> {
    let count = cfg.rep_count();
    check_cap(count, cap)?;
    Ok((0..count).map(|i| u_rep(cfg, i)).collect())
}

/// `U^k [1]` as a formal sum of cosets; fails if two representatives collide.
pub fn u_power_apply(cfg: &UConfig, cap: u64) -> Result<FormalSum<PairKey>> {
    let count = cfg.rep_count();
    check_cap(count, cap)?;
    let frob = frob_power(cfg.n, cfg.q, cfg.k as i64);
    let mut keys: Vec<PairKey> = (0..count)
        .into_par_iter()
        .map(|i| u_rep(cfg, i).mul(&frob).key())
        .collect::<Result<_>>()?;
    keys.par_sort_unstable();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Internal("coset representatives of U^k collide".into()));
    }
    Ok(keys.into_iter().map(|k| (k, coef(1))).collect())
}

/// One application of `U` to an arbitrary sum: `gK -> sum_h g h Frob K` with `g`
/// the upper triangular Hermite representative.
pub fn u_step(x: &FormalSum<PairKey>, n: usize, q: u32, cap: u64) -> Result<FormalSum<PairKey>> {
    let cfg = UConfig::new(n, q, 1)?;
    check_cap(cfg.rep_count().saturating_mul(x.len() as u64), cap)?;
    let frob = frob_power(n, q, 1);
    let hf: Vec<GroupElement> = u_power_reps(&cfg, cap)?.iter().map(|h| h.mul(&frob)).collect();
    x.try_flat_map(|key| {
        let g = GroupElement::from_key(key, q);
        let mut out = FormalSum::new();
        for h in &hf {
            out.add_term(g.mul(h).key()?, coef(1));
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::base_class;

    #[test]
    fn frob_examples() {
        let f = frob_power(1, 3, 1);
        assert_eq!(f.g1, Mat::diag_pow(3, &[1, 0]));
        assert_eq!(f.g2, Mat::diag_pow(3, &[1]));
        assert_eq!(frob_power(2, 3, 0), GroupElement::identity(3, 2));
        assert_eq!(frob_power(3, 2, 4).g2.det().ord(), Some(4));
    }

    #[test]
    fn rep_counts() {
        assert_eq!(u_power_reps(&UConfig::new(1, 2, 1).unwrap(), DEFAULT_CAP).unwrap().len(), 2);
        assert_eq!(u_power_reps(&UConfig::new(2, 2, 1).unwrap(), DEFAULT_CAP).unwrap().len(), 8);
        assert_eq!(u_power_reps(&UConfig::new(2, 3, 0).unwrap(), DEFAULT_CAP).unwrap().len(), 1);
        assert!(matches!(u_power_reps(&UConfig::new(2, 3, 5).unwrap(), 1000), Err(Error::Resource(_))));
    }

    #[test]
    fn distinct_keys() {
        assert_eq!(u_power_apply(&UConfig::new(1, 2, 1).unwrap(), DEFAULT_CAP).unwrap().len(), 2);
        assert_eq!(u_power_apply(&UConfig::new(1, 3, 2).unwrap(), DEFAULT_CAP).unwrap().len(), 9);
    }

    #[test]
    fn iteration_matches_power() {
        for (n, q, kmax) in [(1usize, 2u32, 3u32), (1, 3, 3), (2, 2, 2)] {
            let mut x = base_class(n, q);
            for k in 1..=kmax {
                x = u_step(&x, n, q, DEFAULT_CAP).unwrap();
                assert_eq!(x, u_power_apply(&UConfig::new(n, q, k).unwrap(), DEFAULT_CAP).unwrap(), "n={n} q={q} k={k}");
            }
        }
    }
}
