//! Formal sums over coset keys, minuscule double cosets, and the right Hecke action on `Z[G/K]`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::{cartan_invariants, coset_key, CosetKey, GroupElement, Mat, PairKey};

/// Exact rational coefficients.
pub type Coef = Ratio<i128>;

pub fn coef(n: i128) -> Coef {
    Coef::from_integer(n)
}

/// A finitely supported `Coef`-linear combination of keys; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, Coef>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: K, c: Coef) -> Self {
        let mut s = Self::new();
        s.add_term(key, c);
        s
    }

    pub fn add_term(&mut self, key: K, c: Coef) {
        if c.is_zero() {
            return;
        }
        let mut remove = false;
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                remove = v.is_zero();
            }
            None => {
                self.terms.insert(key.clone(), c);
            }
        }
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &FormalSum<K>) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), *c);
        }
    }

    pub fn add(&self, other: &FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &FormalSum<K>) -> FormalSum<K> {
        self.add(&other.scale(coef(-1)))
    }

    pub fn scale(&self, c: Coef) -> FormalSum<K> {
        if c.is_zero() {
            return Self::new();
        }
        FormalSum { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn get(&self, key: &K) -> Coef {
        self.terms.get(key).copied().unwrap_or_else(Coef::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Coef)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> Coef {
        self.terms.values().fold(Coef::zero(), |a, b| a + b)
    }

    /// Re-key every term, merging coefficients of colliding images.
    pub fn map_keys<L: Ord + Clone, F: Fn(&K) -> L>(&self, f: F) -> FormalSum<L> {
        let mut out = FormalSum::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), *c);
        }
        out
    }

    /// Fallible parallel linear extension of `f`; the merge is order independent.
    pub fn try_flat_map<L, F>(&self, f: F) -> Result<FormalSum<L>>
    where
        K: Sync,
        L: Ord + Clone + Send,
        F: Fn(&K) -> Result<FormalSum<L>> + Sync,
    {
        let entries: Vec<(&K, &Coef)> = self.terms.iter().collect();
        let parts: Vec<Result<(Coef, FormalSum<L>)>> =
            entries.par_iter().map(|(k, c)| f(k).map(|s| (**c, s))).collect();
        let mut out = FormalSum::new();
        for p in parts {
            let (c, s) = p?;
            for (k, v) in s.terms {
                out.add_term(k, v * c);
            }
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Coef)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, Coef)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

/// Which factor of `GL(n+1) x GL(n)` a Hecke generator lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    V,
    W,
}

/// `lambda_k = diag(w, ..., w, 1, ..., 1)` with `k` entries `w`, in `GL_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinusculeCochar {
    pub m: usize,
    pub k: usize,
}

impl MinusculeCochar {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::Domain(format!("minuscule index {k} outside 1..={m}")));
        }
        Ok(MinusculeCochar { m, k })
    }

    pub fn for_factor(n: usize, factor: Factor, k: usize) -> Result<Self> {
        let m = match factor {
            Factor::V => n + 1,
            Factor::W => n,
        };
        Self::new(m, k)
    }

    pub fn exponents(&self) -> Vec<i64> {
        (0..self.m).map(|i| if i < self.k { 1 } else { 0 }).collect()
    }
}

/// Gaussian binomial `[m choose k]_q`.
pub fn gaussian_binomial(m: u32, k: u32, q: u64) -> u128 {
    if k > m {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(m - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Representatives `g_i` with `K lambda(w) K = disjoint union of g_i K`.
///
/// Each rep has `w` on the diagonal at a `k`-subset `S` and a free residue at
/// `(i, j)` whenever `i < j`, `i in S`, `j not in S`.
pub fn decompose_double_coset(lambda: MinusculeCochar, q: u32) -> Vec<Mat> {
    let m = lambda.m;
    let mut out = Vec::new();
    for s in k_subsets(m, lambda.k) {
        let in_s: Vec<bool> = (0..m).map(|i| s.contains(&i)).collect();
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .filter(|&(i, j)| in_s[i] && !in_s[j])
            .collect();
        let exps: Vec<i64> = in_s.iter().map(|&b| b as i64).collect();
        let base = Mat::diag_pow(q, &exps);
        let total = (q as u64).pow(slots.len() as u32);
        for code in 0..total {
            let mut g = base.clone();
            let mut c = code;
            for &(i, j) in &slots {
                let r = (c % q as u64) as i64;
                c /= q as u64;
                g.set(i, j, FieldElem::constant(q, r));
            }
            out.push(g);
        }
    }
    out
}

/// Oracle: orbit of `lambda(w) K` under left multiplication by generators of `GL_m(F_q)`.
pub fn decompose_double_coset_bfs(lambda: MinusculeCochar, q: u32) -> Result<Vec<CosetKey>> {
    let m = lambda.m;
    let mut gens = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let mut e = Mat::identity(q, m);
                e.set(i, j, FieldElem::one(q));
                gens.push(e);
            }
        }
    }
    let prim = (1..q).find(|&g| (1..q - 1).all(|e| pow_mod(g, e, q) != 1)).unwrap_or(1);
    if prim != 1 {
        let mut d = Mat::identity(q, m);
        d.set(0, 0, FieldElem::constant(q, prim as i64));
        gens.push(d);
    }
    let start = Mat::diag_pow(q, &lambda.exponents());
    let target = cartan_invariants(&start)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(coset_key(&start)?);
    queue.push_back(start);
    while let Some(g) = queue.pop_front() {
        for h in &gens {
            let x = h.mul(&g);
            let key = coset_key(&x)?;
            if seen.insert(key.clone()) {
                if cartan_invariants(&x)? != target {
                    return Err(Error::Internal("orbit left the double coset".into()));
                }
                queue.push_back(key.to_mat(q));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn pow_mod(b: u32, e: u32, m: u32) -> u32 {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc * b as u64 % m as u64;
    }
    acc as u32
}

fn cached_reps(lambda: MinusculeCochar, q: u32) -> Arc<Vec<Mat>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, u32), Arc<Vec<Mat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rep cache poisoned");
    guard
        .entry((lambda.m, lambda.k, q))
        .or_insert_with(|| Arc::new(decompose_double_coset(lambda, q)))
        .clone()
}

/// A commutative monomial in the generators `T_{k,V}` (k = 1..=n+1) and `T_{k,W}` (k = 1..=n).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TMonomial {
    pub v: Vec<u32>,
    pub w: Vec<u32>,
}

impl TMonomial {
    pub fn one(n: usize) -> Self {
        TMonomial { v: vec![0; n + 1], w: vec![0; n] }
    }

    pub fn generator(n: usize, factor: Factor, k: usize) -> Self {
        let mut t = Self::one(n);
        match factor {
            Factor::V => t.v[k - 1] = 1,
            Factor::W => t.w[k - 1] = 1,
        }
        t
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn is_one(&self) -> bool {
        self.v.iter().chain(self.w.iter()).all(|&e| e == 0)
    }

    pub fn mul(&self, other: &TMonomial) -> TMonomial {
        TMonomial {
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect(),
        }
    }

    /// Some generator dividing this monomial, and the cofactor.
    pub fn split_generator(&self) -> Option<((Factor, usize), TMonomial)> {
        let mut rest = self.clone();
        if let Some(i) = rest.v.iter().position(|&e| e > 0) {
            rest.v[i] -= 1;
            return Some(((Factor::V, i + 1), rest));
        }
        if let Some(i) = rest.w.iter().position(|&e| e > 0) {
            rest.w[i] -= 1;
            return Some(((Factor::W, i + 1), rest));
        }
        None
    }

    pub fn degree_v(&self) -> u32 {
        self.v.iter().sum()
    }

    pub fn degree_w(&self) -> u32 {
        self.w.iter().sum()
    }
}

impl std::fmt::Display for TMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.v.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("T{}V", i + 1)),
                e => parts.push(format!("T{}V^{e}", i + 1)),
            }
        }
        for (i, &e) in self.w.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("T{}W", i + 1)),
                e => parts.push(format!("T{}W^{e}", i + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Right action of one generator: `gK -> sum_i g g_i K`.
pub fn apply_generator(
    factor: Factor,
    k: usize,
    x: &FormalSum<PairKey>,
    n: usize,
    q: u32,
) -> Result<FormalSum<PairKey>> {
    let lambda = MinusculeCochar::for_factor(n, factor, k)?;
    let reps = cached_reps(lambda, q);
    x.try_flat_map(|key| {
        let base = match factor {
            Factor::V => key.0.to_mat(q),
            Factor::W => key.1.to_mat(q),
        };
        let mut out = FormalSum::new();
        for r in reps.iter() {
            let new_key = match factor {
                Factor::V => (coset_key(&base.mul(r))?, key.1.clone()),
                Factor::W => (key.0.clone(), coset_key(&base.mul(r))?),
            };
            out.add_term(new_key, Coef::one());
        }
        Ok(out)
    })
}

/// Right convolution by a monomial in the Hecke generators.
pub fn hecke_apply(mono: &TMonomial, x: &FormalSum<PairKey>, q: u32) -> Result<FormalSum<PairKey>> {
    let n = mono.n();
    let mut cur = x.clone();
    let mut rest = mono.clone();
    while let Some(((f, k), r)) = rest.split_generator() {
        cur = apply_generator(f, k, &cur, n, q)?;
        rest = r;
    }
    Ok(cur)
}

/// `sum_m c_m * T^m (x)` with intermediate products shared across monomials.
pub fn hecke_apply_combination(
    combo: &[(TMonomial, Coef)],
    x: &FormalSum<PairKey>,
    q: u32,
) -> Result<FormalSum<PairKey>> {
    let mut memo: HashMap<TMonomial, FormalSum<PairKey>> = HashMap::new();
    let mut out = FormalSum::new();
    for (mono, c) in combo {
        let img = apply_memo(mono, x, q, &mut memo)?;
        out.add_assign(&img.scale(*c));
    }
    Ok(out)
}

fn apply_memo(
    mono: &TMonomial,
    x: &FormalSum<PairKey>,
    q: u32,
    memo: &mut HashMap<TMonomial, FormalSum<PairKey>>,
) -> Result<FormalSum<PairKey>> {
    if let Some(v) = memo.get(mono) {
        return Ok(v.clone());
    }
    let val = match mono.split_generator() {
        None => x.clone(),
        Some(((f, k), rest)) => {
            let inner = apply_memo(&rest, x, q, memo)?;
            apply_generator(f, k, &inner, mono.n(), q)?
        }
    };
    memo.insert(mono.clone(), val.clone());
    Ok(val)
}

/// Left translation of every coset by a group element.
pub fn left_translate_cosets(h: &GroupElement, x: &FormalSum<PairKey>) -> Result<FormalSum<PairKey>> {
    let q = h.q();
    x.try_flat_map(|key| {
        let g = GroupElement::from_key(key, q);
        Ok(FormalSum::single(h.mul(&g).key()?, Coef::one()))
    })
}

/// The class `[1] = K` in `Z[G/K]`.
pub fn base_class(n: usize, q: u32) -> FormalSum<PairKey> {
    FormalSum::single(GroupElement::identity(q, n).key().expect("identity"), Coef::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 3, 5), 1);
    }

    #[test]
    fn decomposition_matches_bfs() {
        for (m, q) in [(2usize, 3u32), (3, 2), (3, 3)] {
            for k in 1..=m {
                let lam = MinusculeCochar::new(m, k).unwrap();
                let reps = decompose_double_coset(lam, q);
                let keys: BTreeSet<CosetKey> = reps.iter().map(|g| coset_key(g).unwrap()).collect();
                assert_eq!(keys.len(), reps.len());
                assert_eq!(keys.len() as u128, gaussian_binomial(m as u32, k as u32, q as u64));
                let bfs: BTreeSet<CosetKey> = decompose_double_coset_bfs(lam, q).unwrap().into_iter().collect();
                assert_eq!(keys, bfs);
            }
        }
    }

    #[test]
    fn generator_actions_on_base_class() {
        let x = base_class(1, 2);
        let t1w = hecke_apply(&TMonomial::generator(1, Factor::W, 1), &x, 2).unwrap();
        assert_eq!(t1w.len(), 1);
        let t1v = hecke_apply(&TMonomial::generator(1, Factor::V, 1), &x, 2).unwrap();
        assert_eq!(t1v.len(), 3);
        assert!(t1v.iter().all(|(_, c)| *c == coef(1)));
        assert_eq!(hecke_apply(&TMonomial::one(1), &x, 2).unwrap(), x);
    }

    #[test]
    fn formal_sum_drops_zeros() {
        let mut s: FormalSum<u32> = FormalSum::new();
        s.add_term(1, coef(2));
        s.add_term(1, coef(-2));
        assert!(s.is_empty());
    }
}
