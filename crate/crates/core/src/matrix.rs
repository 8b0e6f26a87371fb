//! Square matrices over `F_q((w))`, the group `GL(n+1) x GL(n)`, subgroup
//! predicates, Cartan invariants and canonical representatives of `gK`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    m: usize,
    q: u32,
    e: Vec<FieldElem>,
}

impl Mat {
    pub fn zero(q: u32, m: usize) -> Self {
        Mat { m, q, e: vec![FieldElem::zero(q); m * m] }
    }

    pub fn identity(q: u32, m: usize) -> Self {
        let mut a = Self::zero(q, m);
        for i in 0..m {
            a.e[i * m + i] = FieldElem::one(q);
        }
        a
    }

    pub fn diag(q: u32, d: &[FieldElem]) -> Self {
        let m = d.len();
        let mut a = Self::zero(q, m);
        for (i, x) in d.iter().enumerate() {
            a.e[i * m + i] = x.clone();
        }
        a
    }

    /// `diag(w^a_1, ..., w^a_m)`.
    pub fn diag_pow(q: u32, a: &[i64]) -> Self {
        let d: Vec<FieldElem> = a.iter().map(|&k| FieldElem::uniformizer_pow(q, k)).collect();
        Self::diag(q, &d)
    }

    pub fn from_rows(q: u32, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Domain("matrix rows must form a square".into()));
        }
        Ok(Mat { m, q, e: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.e[i * self.m + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.e[i * self.m + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<FieldElem>> {
        self.e.chunks(self.m).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.m, other.m, "size mismatch");
        let m = self.m;
        let mut out = Mat::zero(self.q, m);
        for i in 0..m {
            for k in 0..m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn det(&self) -> FieldElem {
        let m = self.m;
        let mut a = self.clone();
        let mut det = FieldElem::one(self.q);
        for c in 0..m {
            let Some(p) = (c..m).find(|&r| !a.get(r, c).is_zero()) else {
                return FieldElem::zero(self.q);
            };
            if p != c {
                a.swap_rows(p, c);
                det = det.neg();
            }
            let piv = a.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..m {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).mul(&inv);
                a.row_axpy(r, c, &f.neg());
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Mat> {
        let m = self.m;
        let mut a = self.clone();
        let mut b = Mat::identity(self.q, m);
        for c in 0..m {
            let p = (c..m)
                .find(|&r| !a.get(r, c).is_zero())
                .ok_or_else(|| Error::Domain("singular matrix".into()))?;
            a.swap_rows(p, c);
            b.swap_rows(p, c);
            let inv = a.get(c, c).inv()?;
            a.scale_row(c, &inv);
            b.scale_row(c, &inv);
            for r in 0..m {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).neg();
                a.row_axpy(r, c, &f);
                b.row_axpy(r, c, &f);
            }
        }
        Ok(b)
    }

    pub fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.m {
            self.e.swap(r1 * self.m + j, r2 * self.m + j);
        }
    }

    pub fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for i in 0..self.m {
            self.e.swap(i * self.m + c1, i * self.m + c2);
        }
    }

    pub fn scale_row(&mut self, r: usize, f: &FieldElem) {
        for j in 0..self.m {
            let v = self.get(r, j).mul(f);
            self.set(r, j, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, f: &FieldElem) {
        for i in 0..self.m {
            let v = self.get(i, c).mul(f);
            self.set(i, c, v);
        }
    }

    /// `row[dst] += f * row[src]`.
    pub fn row_axpy(&mut self, dst: usize, src: usize, f: &FieldElem) {
        for j in 0..self.m {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j).add(&f.mul(s));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += f * col[src]`.
    pub fn col_axpy(&mut self, dst: usize, src: usize, f: &FieldElem) {
        for i in 0..self.m {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, dst).add(&f.mul(s));
            self.set(i, dst, v);
        }
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().all(|x| x.is_integral())
    }

    /// Upper-left `k x k` block.
    pub fn block(&self, k: usize) -> Mat {
        let mut out = Mat::zero(self.q, k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Minimal valuation over all entries, `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.e.iter().filter_map(|x| x.ord()).min()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .e
            .chunks(self.m)
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// `h -> diag(h, 1)`.
pub fn embed_iota(h: &Mat) -> Mat {
    let n = h.size();
    let mut out = Mat::identity(h.q(), n + 1);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, h.get(i, j).clone());
        }
    }
    out
}

/// Cartan invariants `a_1 >= ... >= a_m` with `g in K diag(w^a) K`.
pub fn cartan_invariants(g: &Mat) -> Result<Vec<i64>> {
    let m = g.size();
    let mut a = g.clone();
    let mut out = Vec::with_capacity(m);
    for t in 0..m {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..m {
            for j in t..m {
                if let Some(v) = a.get(i, j).ord() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or_else(|| Error::Domain("singular matrix".into()))?;
        a.swap_rows(i, t);
        a.swap_cols(j, t);
        let inv = a.get(t, t).inv()?;
        for r in t + 1..m {
            if !a.get(r, t).is_zero() {
                let f = a.get(r, t).mul(&inv).neg();
                a.row_axpy(r, t, &f);
            }
        }
        for c in t + 1..m {
            if !a.get(t, c).is_zero() {
                let f = a.get(t, c).mul(&inv).neg();
                a.col_axpy(c, t, &f);
            }
        }
        out.push(v);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    Ok(out)
}

/// Canonical identifier of the coset `gK`: the column Hermite form of the lattice `g O^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetKey {
    /// Diagonal exponents `a_i` (the pivot of row `i` is `w^a_i`).
    pub diag: Vec<i64>,
    /// Strictly upper entries, row-major, each as sorted `(exponent, residue)` terms.
    pub upper: Vec<Vec<(i64, u32)>>,
}

impl CosetKey {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// The Hermite representative matrix.
    pub fn to_mat(&self, q: u32) -> Mat {
        let m = self.diag.len();
        let mut g = Mat::diag_pow(q, &self.diag);
        let mut idx = 0;
        for i in 0..m {
            for j in i + 1..m {
                let t = &self.upper[idx];
                idx += 1;
                if t.is_empty() {
                    continue;
                }
                let lo = t[0].0;
                let hi = t.last().unwrap().0;
                let mut coeffs = vec![0u32; (hi - lo + 1) as usize];
                for &(e, c) in t {
                    coeffs[(e - lo) as usize] = c;
                }
                g.set(i, j, LaurentPoly::new(q, lo, coeffs).to_field());
            }
        }
        g
    }

    /// Valuation of the determinant of any representative.
    pub fn det_valuation(&self) -> i64 {
        self.diag.iter().sum()
    }

    pub fn token(&self) -> String {
        let mut s = format!("d={:?}", self.diag);
        let m = self.diag.len();
        let mut idx = 0;
        for i in 0..m {
            for j in i + 1..m {
                let t = &self.upper[idx];
                idx += 1;
                if t.is_empty() {
                    continue;
                }
                let terms: Vec<String> = t.iter().map(|(e, c)| format!("{c}w^{e}")).collect();
                s.push_str(&format!(";({i},{j})={}", terms.join("+")));
            }
        }
        s
    }
}

impl fmt::Display for CosetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Upper triangular Hermite form of the column lattice of `g`.
pub fn hermite_form(g: &Mat) -> Result<Mat> {
    let m = g.size();
    let q = g.q();
    let mut a = g.clone();
    for r in (0..m).rev() {
        let mut best: Option<(i64, usize)> = None;
        for j in 0..=r {
            if let Some(v) = a.get(r, j).ord() {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
        }
        let (v, j) = best.ok_or_else(|| Error::Domain("singular matrix".into()))?;
        a.swap_cols(j, r);
        let unit = a.get(r, r).unit_part();
        a.scale_col(r, &unit.inv()?);
        let piv_inv = FieldElem::uniformizer_pow(q, -v);
        for c in 0..r {
            if !a.get(r, c).is_zero() {
                let f = a.get(r, c).mul(&piv_inv).neg();
                a.col_axpy(c, r, &f);
            }
        }
    }
    for i in (0..m).rev() {
        let ai = a.get(i, i).ord().expect("nonzero pivot");
        for j in i + 1..m {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            let t = e.reduce_mod(ai);
            if &t == e {
                continue;
            }
            let f = t.sub(e).shifted(-ai);
            a.col_axpy(j, i, &f);
            a.set(i, j, t);
        }
    }
    Ok(a)
}

/// Canonical key of `gK`.
pub fn coset_key(g: &Mat) -> Result<CosetKey> {
    let h = hermite_form(g)?;
    let m = h.size();
    let diag = (0..m).map(|i| h.get(i, i).ord().unwrap()).collect();
    let mut upper = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let x = h.get(i, j);
            debug_assert!(x.is_laurent());
            upper.push(x.numerator().terms().collect());
        }
    }
    Ok(CosetKey { diag, upper })
}

pub fn is_in_k(g: &Mat) -> bool {
    g.is_integral() && g.det().is_unit()
}

pub fn is_in_iwahori(g: &Mat) -> bool {
    if !is_in_k(g) {
        return false;
    }
    let m = g.size();
    (0..m).all(|i| (0..i).all(|j| g.get(i, j).is_zero() || g.get(i, j).ord().unwrap() >= 1))
}

pub fn is_in_iwahori_plus(g: &Mat) -> bool {
    let m = g.size();
    for i in 0..m {
        for j in 0..m {
            let x = g.get(i, j);
            let ok = match i.cmp(&j) {
                std::cmp::Ordering::Greater => x.is_zero(),
                std::cmp::Ordering::Equal => x.is_one(),
                std::cmp::Ordering::Less => x.is_integral(),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// An element `(g1, g2)` of `GL(n+1) x GL(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub g1: Mat,
    pub g2: Mat,
}

/// Canonical key of a coset of `G = GL(n+1) x GL(n)` modulo `K`.
pub type PairKey = (CosetKey, CosetKey);

impl GroupElement {
    pub fn new(g1: Mat, g2: Mat) -> Result<Self> {
        if g1.size() != g2.size() + 1 {
            return Err(Error::Domain("factor sizes must be n+1 and n".into()));
        }
        if g1.det().is_zero() || g2.det().is_zero() {
            return Err(Error::Domain("group element must be invertible".into()));
        }
        Ok(GroupElement { g1, g2 })
    }

    pub fn identity(q: u32, n: usize) -> Self {
        GroupElement { g1: Mat::identity(q, n + 1), g2: Mat::identity(q, n) }
    }

    /// The diagonal image `(iota(h), h)` of `h in GL(n)`.
    pub fn delta(h: &Mat) -> Self {
        GroupElement { g1: embed_iota(h), g2: h.clone() }
    }

    pub fn n(&self) -> usize {
        self.g2.size()
    }

    pub fn q(&self) -> u32 {
        self.g2.q()
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement { g1: self.g1.mul(&other.g1), g2: self.g2.mul(&other.g2) }
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        Ok(GroupElement { g1: self.g1.inverse()?, g2: self.g2.inverse()? })
    }

    pub fn key(&self) -> Result<PairKey> {
        Ok((coset_key(&self.g1)?, coset_key(&self.g2)?))
    }

    pub fn from_key(key: &PairKey, q: u32) -> GroupElement {
        GroupElement { g1: key.0.to_mat(q), g2: key.1.to_mat(q) }
    }
}

/// Subgroups of `G` with decidable membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupSpec {
    K,
    Iwahori,
    IwahoriPlus,
    H,
    HDer,
    /// `H_c = det^{-1}(1 + w^c O)`, with `H_0 = det^{-1}(O^x)`.
    HCong(u32),
    DeltaK,
}

fn is_in_h(g: &GroupElement) -> bool {
    embed_iota(&g.g2) == g.g1
}

/// Membership of a group element in one of the named subgroups.
pub fn is_member(g: &GroupElement, s: SubgroupSpec) -> bool {
    match s {
        SubgroupSpec::K => is_in_k(&g.g1) && is_in_k(&g.g2),
        SubgroupSpec::Iwahori => is_in_iwahori(&g.g1) && is_in_iwahori(&g.g2),
        SubgroupSpec::IwahoriPlus => is_in_iwahori_plus(&g.g1) && is_in_iwahori_plus(&g.g2),
        SubgroupSpec::H => is_in_h(g),
        SubgroupSpec::HDer => is_in_h(g) && g.g2.det().is_one(),
        SubgroupSpec::HCong(c) => {
            if !is_in_h(g) {
                return false;
            }
            let d = g.g2.det();
            if c == 0 {
                d.is_unit()
            } else {
                let diff = d.sub(&FieldElem::one(g.q()));
                diff.is_zero() || diff.ord().unwrap() >= c as i64
            }
        }
        SubgroupSpec::DeltaK => is_in_h(g) && is_in_k(&g.g2),
    }
}

/// A random polynomial in `w` with `deg < len`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, q: u32, lo: i64, len: usize) -> FieldElem {
    let coeffs: Vec<u32> = (0..len).map(|_| rng.gen_range(0..q)).collect();
    LaurentPoly::new(q, lo, coeffs).to_field()
}

/// A random element of `GL_m(O)`, as a product of a permutation and
/// unipotent/diagonal-unit factors with polynomial entries of degree `< depth`.
pub fn random_k<R: Rng + ?Sized>(rng: &mut R, q: u32, m: usize, depth: usize) -> Mat {
    let mut lower = Mat::identity(q, m);
    let mut upper = Mat::identity(q, m);
    for i in 0..m {
        for j in 0..m {
            if i > j {
                lower.set(i, j, random_poly(rng, q, 0, depth));
            } else if i < j {
                upper.set(i, j, random_poly(rng, q, 0, depth));
            } else {
                let mut u = random_poly(rng, q, 0, depth);
                while !u.is_unit() {
                    u = random_poly(rng, q, 0, depth);
                }
                upper.set(i, i, u);
            }
        }
    }
    let mut perm = Mat::identity(q, m);
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap_rows(i, j);
    }
    perm.mul(&lower).mul(&upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn w(q: u32, k: i64) -> FieldElem {
        FieldElem::uniformizer_pow(q, k)
    }

    fn one(q: u32) -> FieldElem {
        FieldElem::one(q)
    }

    #[test]
    fn iota_examples() {
        assert_eq!(embed_iota(&Mat::identity(3, 2)), Mat::identity(3, 3));
        let d = Mat::diag_pow(3, &[1, 0]);
        assert_eq!(embed_iota(&d), Mat::diag_pow(3, &[1, 0, 0]));
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan_invariants(&Mat::diag_pow(3, &[2, 0])).unwrap(), vec![2, 0]);
        let g = Mat::from_rows(3, vec![vec![w(3, 1), one(3)], vec![FieldElem::zero(3), w(3, 1)]]).unwrap();
        assert_eq!(cartan_invariants(&g).unwrap(), vec![2, 0]);
        assert_eq!(cartan_invariants(&Mat::identity(5, 3)).unwrap(), vec![0, 0, 0]);
        assert!(cartan_invariants(&Mat::zero(3, 2)).is_err());
    }

    #[test]
    fn hermite_examples() {
        let q = 3;
        let g = Mat::from_rows(q, vec![vec![w(q, 1), one(q)], vec![FieldElem::zero(q), one(q)]]).unwrap();
        let key = coset_key(&g).unwrap();
        assert_eq!(key.to_mat(q), g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let id = coset_key(&Mat::identity(q, 3)).unwrap();
        for _ in 0..20 {
            assert_eq!(coset_key(&random_k(&mut rng, q, 3, 3)).unwrap(), id);
        }
    }

    #[test]
    fn membership_examples() {
        let q = 3;
        assert!(!is_in_k(&Mat::diag_pow(q, &[1, 0])));
        let u = Mat::from_rows(q, vec![vec![one(q), w(q, 2)], vec![FieldElem::zero(q), one(q)]]).unwrap();
        assert!(is_in_iwahori_plus(&u));
        let h = GroupElement::delta(&Mat::diag(q, &[one(q).add(&w(q, 1)), one(q)]));
        assert!(is_member(&h, SubgroupSpec::HCong(1)));
        assert!(!is_member(&h, SubgroupSpec::HCong(2)));
        assert!(is_member(&h, SubgroupSpec::HCong(0)));
        assert!(!is_member(&h, SubgroupSpec::HDer));
    }

    #[test]
    fn inverse_and_det() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let k = random_k(&mut rng, 5, 3, 2);
            let g = Mat::diag_pow(5, &[2, -1, 0]).mul(&k);
            let gi = g.inverse().unwrap();
            assert_eq!(g.mul(&gi), Mat::identity(5, 3));
            assert_eq!(g.det().ord(), Some(1));
        }
    }
}
