//! Sparse multivariate polynomials with rational coefficients and the
//! symmetric-function conversions used by the Hecke polynomial.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::coset::{coef, Coef};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Coef>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Coef) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coef::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Coef::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Coef) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coef)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coef {
        self.terms.get(exps).copied().unwrap_or_else(Coef::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Coef) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(coef(-1)))
    }

    pub fn scale(&self, c: Coef) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut acc: HashMap<Vec<u32>, Coef> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Coef::zero) += c1 * c2;
            }
        }
        MPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute polynomials (over a common ring) for every variable.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, *c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache.entry((i, k)).or_insert_with(|| images[i].pow(k)).clone();
                term = term.mul(&p);
            }
            out = out.add(&term);
        }
        out
    }

    /// Embed into a larger variable set, sending variable `i` to `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; nvars];
                f[offset..offset + e.len()].copy_from_slice(e);
                (f, *c)
            })
            .collect();
        MPoly { nvars, terms }
    }

    /// Evaluate modulo a prime `p`; all denominators must be invertible.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut v = ratio_mod(c, p);
            for (i, &k) in e.iter().enumerate() {
                v = v * pow_mod(point[i] % p, k as u64, p) % p;
            }
            acc = (acc + v) % p;
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn ratio_mod(c: &Coef, p: u64) -> u64 {
    let pm = p as i128;
    let num = c.numer().rem_euclid(pm) as u64;
    let den = c.denom().rem_euclid(pm) as u64;
    assert!(den != 0, "denominator divisible by evaluation prime");
    num * pow_mod(den, p - 2, p) % p
}

/// `Q_k` with `sum_j y_j^k = Q_k(e_1, ..., e_m)` in `m` variables (Newton–Girard).
pub fn newton_girard(k: usize, m: usize) -> MPoly {
    let mut p: Vec<MPoly> = vec![MPoly::zero(m)];
    let e = |i: usize| -> MPoly {
        if i == 0 {
            MPoly::one(m)
        } else if i <= m {
            MPoly::var(m, i - 1)
        } else {
            MPoly::zero(m)
        }
    };
    for r in 1..=k {
        let mut acc = MPoly::zero(m);
        for i in 1..r {
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&e(i).mul(&p[r - i]).scale(coef(sign)));
        }
        let sign = if (r - 1) % 2 == 0 { 1 } else { -1 };
        acc = acc.add(&e(r).scale(coef(sign * r as i128)));
        p.push(acc);
    }
    p.pop().unwrap()
}

/// Elementary symmetric polynomial `e_k(x_1, ..., x_m)` in raw variables.
pub fn elementary(k: usize, m: usize) -> MPoly {
    let mut out = MPoly::zero(m);
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut e = vec![0u32; m];
        for &i in &idx {
            e[i] = 1;
        }
        out.add_term(e, Coef::one());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < m - k + pos {
                idx[pos] += 1;
                for r in pos + 1..k {
                    idx[r] = idx[r - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Rewrite a polynomial in raw variables `x_1..x_a, y_1..y_b`, symmetric in the
/// `x`'s and in the `y`'s separately, in terms of `X_1..X_a, Y_1..Y_b`.
///
/// Leading-monomial elimination in lexicographic order on `(x-exponents, y-exponents)`.
pub fn reduce_bisymmetric(f: &MPoly, a: usize, b: usize) -> Result<MPoly> {
    let nv = a + b;
    assert_eq!(f.nvars(), nv);
    let ex: Vec<MPoly> = (1..=a).map(|k| elementary(k, a).embed(nv, 0)).collect();
    let ey: Vec<MPoly> = (1..=b).map(|k| elementary(k, b).embed(nv, a)).collect();
    let mut rest = f.clone();
    let mut out = MPoly::zero(nv);
    let mut guard = 0usize;
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::Internal("symmetric reduction did not terminate".into()));
        }
        let (xa, yb) = lead.split_at(a);
        let monotone = |v: &[u32]| v.windows(2).all(|w| w[0] >= w[1]);
        if !monotone(xa) || !monotone(yb) {
            return Err(Error::Internal(format!("non-symmetric residue at exponent {lead:?}")));
        }
        let mut basis_exp = vec![0u32; nv];
        let mut prod = MPoly::constant(nv, c);
        for i in 0..a {
            let d = xa[i] - xa.get(i + 1).copied().unwrap_or(0);
            basis_exp[i] = d;
            if d > 0 {
                prod = prod.mul(&ex[i].pow(d));
            }
        }
        for i in 0..b {
            let d = yb[i] - yb.get(i + 1).copied().unwrap_or(0);
            basis_exp[a + i] = d;
            if d > 0 {
                prod = prod.mul(&ey[i].pow(d));
            }
        }
        out.add_term(basis_exp, c);
        rest = rest.sub(&prod);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_girard_small_cases() {
        assert_eq!(newton_girard(1, 3), MPoly::var(3, 0));
        let y = |i| MPoly::var(3, i);
        let q2 = y(0).mul(&y(0)).sub(&y(1).scale(coef(2)));
        assert_eq!(newton_girard(2, 3), q2);
        let q3 = y(0).pow(3).sub(&y(0).mul(&y(1)).scale(coef(3))).add(&y(2).scale(coef(3)));
        assert_eq!(newton_girard(3, 3), q3);
    }

    #[test]
    fn newton_girard_numeric() {
        let p = 10007;
        let ys = [3u64, 5, 11, 2];
        for m in 1..=4 {
            let es: Vec<u64> = (1..=m).map(|k| elementary(k, m).eval_mod(&ys[..m], p)).collect();
            for k in 1..=2 * m {
                let want = ys[..m].iter().fold(0, |acc, &y| (acc + pow_mod(y, k as u64, p)) % p);
                assert_eq!(newton_girard(k, m).eval_mod(&es, p), want, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn elementary_counts() {
        assert_eq!(elementary(2, 4).len(), 6);
        assert_eq!(elementary(0, 3), MPoly::one(3));
        assert!(elementary(4, 3).is_zero());
    }

    #[test]
    fn reduce_power_sum() {
        // x1^2 + x2^2 = X1^2 - 2 X2, with no y variables
        let f = MPoly::monomial(vec![2, 0], coef(1)).add(&MPoly::monomial(vec![0, 2], coef(1)));
        let r = reduce_bisymmetric(&f, 2, 0).unwrap();
        let want = MPoly::monomial(vec![2, 0], coef(1)).add(&MPoly::monomial(vec![0, 1], coef(-2)));
        assert_eq!(r, want);
        let bad = MPoly::monomial(vec![2, 0], coef(1));
        assert!(reduce_bisymmetric(&bad, 2, 0).is_err());
    }
}
