//! Normal forms for `H \ G / K`, refined keys for the quotients by `H_0`, `H_1`
//! and `H^der`, stabilizer determinants and the trace `Tr_{1,0}`.
//!
//! A coset `gK` with `g = (g1, g2)` is reduced through `x = iota(g2)^{-1} g1`,
//! whose lattice `L = x O^{n+1}` is well defined up to `iota(K_2)`. After
//! column operations `x = [[A, w], [0, w^c]]`, Smith reduction of `A` gives
//! `D_alpha` with `alpha` non-increasing, and the last column is pushed to the
//! saturated shape `(w^m_1, ..., w^m_n)`. The representative in the
//! `G`-convention is `g1 = [[diag(w^a), 1], [0, w^c]]`, `g2 = diag(w^b)` with
//! `a = alpha - m` and `b = -m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coset::{coef, Coef, FormalSum};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::matrix::{coset_key, embed_iota, GroupElement, Mat, PairKey};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub c: i64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl NormalForm {
    pub fn trivial(n: usize) -> Self {
        NormalForm { c: 0, a: vec![0; n], b: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Builds the form from the lattice data `(c, alpha, m)`.
    pub fn from_lattice_data(c: i64, alpha: &[i64], m: &[i64]) -> Self {
        NormalForm {
            c,
            a: alpha.iter().zip(m).map(|(x, y)| x - y).collect(),
            b: m.iter().map(|y| -y).collect(),
        }
    }

    pub fn alpha(&self) -> Vec<i64> {
        self.a.iter().zip(&self.b).map(|(x, y)| x - y).collect()
    }

    pub fn m(&self) -> Vec<i64> {
        self.b.iter().map(|y| -y).collect()
    }

    /// The representative `(g1, g2)` displayed in the module docs.
    pub fn representative(&self, q: u32) -> GroupElement {
        let n = self.n();
        let mut g1 = Mat::diag_pow(q, &self.a.iter().copied().chain([self.c]).collect::<Vec<_>>());
        for i in 0..n {
            g1.set(i, n, FieldElem::one(q));
        }
        GroupElement { g1, g2: Mat::diag_pow(q, &self.b) }
    }

    /// `x_0 = [[D_alpha, w^m], [0, w^c]]`, the reduced lattice basis.
    pub fn lattice_basis(&self, q: u32) -> Mat {
        let n = self.n();
        let alpha = self.alpha();
        let m = self.m();
        let mut x = Mat::diag_pow(q, &alpha.iter().copied().chain([self.c]).collect::<Vec<_>>());
        for i in 0..n {
            if m[i] < alpha[i] {
                x.set(i, n, FieldElem::uniformizer_pow(q, m[i]));
            }
        }
        x
    }

    /// True when `(alpha, m)` is a reduced datum: `alpha` non-increasing and `m` saturated.
    pub fn is_reduced(&self) -> bool {
        let alpha = self.alpha();
        let m = self.m();
        let n = self.n();
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        (0..n).all(|i| {
            m[i] <= alpha[i] && (0..n).all(|j| m[i] <= m[j] + (alpha[i] - alpha[j]).max(0))
        })
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(c={}; a={:?}; b={:?})", self.c, self.a, self.b)
    }
}

/// `(c, a - b)`: necessary for equality of `H`-classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassInvariant {
    pub c: i64,
    pub d: Vec<i64>,
}

pub fn class_invariant(nf: &NormalForm) -> ClassInvariant {
    ClassInvariant { c: nf.c, d: nf.alpha() }
}

/// Data recorded while reducing `g` to its normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// `ord det g2 - sum(b)`.
    pub shift: i64,
    /// Unit part of `det(g2) / det(k0)` where `iota(k0) L = L_0`.
    pub unit: FieldElem,
    /// `k0` itself.
    pub k0: Mat,
}

fn smith_left(a: &Mat) -> Result<(Vec<i64>, Mat)> {
    let n = a.size();
    let q = a.q();
    let mut x = a.clone();
    let mut p = Mat::identity(q, n);
    let mut vals = Vec::with_capacity(n);
    for t in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if let Some(v) = x.get(i, j).ord() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.ok_or_else(|| Error::Domain("singular matrix".into()))?;
        x.swap_rows(i, t);
        p.swap_rows(i, t);
        x.swap_cols(j, t);
        let uinv = x.get(t, t).unit_part().inv()?;
        x.scale_row(t, &uinv);
        p.scale_row(t, &uinv);
        let piv_inv = FieldElem::uniformizer_pow(q, -v);
        for r in t + 1..n {
            if !x.get(r, t).is_zero() {
                let f = x.get(r, t).mul(&piv_inv).neg();
                x.row_axpy(r, t, &f);
                p.row_axpy(r, t, &f);
            }
        }
        for c in t + 1..n {
            if !x.get(t, c).is_zero() {
                let f = x.get(t, c).mul(&piv_inv).neg();
                x.col_axpy(c, t, &f);
            }
        }
        vals.push(v);
    }
    // pivots come out ascending; reverse to get a non-increasing alpha
    vals.reverse();
    let mut rev = Mat::zero(q, n);
    for i in 0..n {
        rev.set(i, n - 1 - i, FieldElem::one(q));
    }
    Ok((vals, rev.mul(&p)))
}

fn reduce_component(w: &FieldElem, alpha: i64) -> FieldElem {
    w.reduce_mod(alpha)
}

fn component_val(w: &FieldElem, alpha: i64) -> i64 {
    w.ord().map_or(alpha, |v| v.min(alpha))
}

/// Reduce `gK` to its normal form, recording the witness.
pub fn normal_form(g: &GroupElement) -> Result<(NormalForm, Witness)> {
    let n = g.n();
    let q = g.q();
    let mut x = embed_iota(&g.g2).inverse()?.mul(&g.g1);

    // last row -> (0, ..., 0, w^c)
    let mut best: Option<(i64, usize)> = None;
    for j in 0..=n {
        if let Some(v) = x.get(n, j).ord() {
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, j));
            }
        }
    }
    let (c, j) = best.ok_or_else(|| Error::Domain("singular matrix".into()))?;
    x.swap_cols(j, n);
    let uinv = x.get(n, n).unit_part().inv()?;
    x.scale_col(n, &uinv);
    let piv_inv = FieldElem::uniformizer_pow(q, -c);
    for col in 0..n {
        if !x.get(n, col).is_zero() {
            let f = x.get(n, col).mul(&piv_inv).neg();
            x.col_axpy(col, n, &f);
        }
    }

    let (alpha, mut k0) = if n == 0 {
        (Vec::new(), Mat::identity(q, 0))
    } else {
        smith_left(&x.block(n))?
    };
    let w0: Vec<FieldElem> = (0..n).map(|i| x.get(i, n).clone()).collect();
    let mut w: Vec<FieldElem> = (0..n)
        .map(|i| {
            let mut acc = FieldElem::zero(q);
            for j in 0..n {
                acc = acc.add(&k0.get(i, j).mul(&w0[j]));
            }
            reduce_component(&acc, alpha[i])
        })
        .collect();

    // relax valuations until saturated
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let gap = (alpha[i] - alpha[j]).max(0);
                let bi = component_val(&w[i], alpha[i]);
                let bj = component_val(&w[j], alpha[j]);
                if bj + gap < bi {
                    let t = FieldElem::uniformizer_pow(q, gap);
                    w[i] = reduce_component(&w[i].add(&t.mul(&w[j])), alpha[i]);
                    k0.row_axpy(i, j, &t);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let mi = component_val(&w[i], alpha[i]);
        if mi < alpha[i] {
            let u = w[i].unit_part();
            k0.scale_row(i, &u.inv()?);
        }
        m.push(mi);
    }
    let nf = NormalForm::from_lattice_data(c, &alpha, &m);
    let det_g2 = g.g2.det();
    let s = det_g2.ord().ok_or_else(|| Error::Domain("singular second factor".into()))?;
    let unit = det_g2.unit_part().div(&k0.det())?;
    if !unit.is_unit() {
        return Err(Error::Internal("reduction witness is not in K_2".into()));
    }
    let shift = s - nf.b.iter().sum::<i64>();
    Ok((nf, Witness { shift, unit, k0 }))
}

/// Check that `iota(k0)` carries the lattice of `g` onto the reduced lattice, exactly.
pub fn verify_witness(g: &GroupElement, nf: &NormalForm, wit: &Witness) -> Result<bool> {
    let q = g.q();
    let x = embed_iota(&g.g2).inverse()?.mul(&g.g1);
    let lhs = coset_key(&embed_iota(&wit.k0).mul(&x))?;
    let rhs = coset_key(&nf.lattice_basis(q))?;
    Ok(lhs == rhs && crate::matrix::is_in_k(&wit.k0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabDet {
    AllUnits,
    /// `1 + w^m O` with `m >= 1`.
    Congruence(u32),
}

/// Determinant image of the `H`-stabilizer of the class with data `(a, b)`.
pub fn stabilizer_det(a: &[i64], b: &[i64]) -> StabDet {
    let n = a.len();
    if a.iter().any(|&x| x <= 0) {
        return StabDet::AllUnits;
    }
    let mut best = *a.iter().min().expect("n >= 1");
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let cij = (a[i] - a[j]).max(b[i] - b[j]);
            if cij <= 0 {
                return StabDet::AllUnits;
            }
            best = best.min(cij);
        }
    }
    StabDet::Congruence(best as u32)
}

pub fn conductor_of(nf: &NormalForm) -> u32 {
    match stabilizer_det(&nf.a, &nf.b) {
        StabDet::AllUnits => 0,
        StabDet::Congruence(m) => m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    H,
    H0,
    H1,
    HDer,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::H => "h",
            Level::H0 => "h0",
            Level::H1 => "h1",
            Level::HDer => "hder",
        }
    }
}

/// Class of `gK` in `H' \ G / K` for `H'` one of `H`, `H_0`, `H_1`, `H^der`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefinedKey {
    pub nf: NormalForm,
    pub shift: Option<i64>,
    /// Residue digits of the unit class modulo `w^len`; `None` when not tracked or conductor 0.
    pub unit: Option<Vec<u32>>,
}

impl RefinedKey {
    pub fn conductor(&self) -> u32 {
        conductor_of(&self.nf)
    }

    pub fn level_h0(&self) -> RefinedKey {
        RefinedKey { nf: self.nf.clone(), shift: self.shift, unit: None }
    }

    /// Left translation by `h in H` with determinant `w^v * u`.
    pub fn translate(&self, v: i64, u: &FieldElem) -> RefinedKey {
        let shift = self.shift.map(|s| s + v);
        let unit = self.unit.as_ref().map(|digits| {
            let len = digits.len() as i64;
            let cur = crate::field::LaurentPoly::new(u.q(), 0, digits.clone()).to_field();
            digits_mod(&cur.mul(u), len)
        });
        RefinedKey { nf: self.nf.clone(), shift, unit }
    }

    pub fn token(&self) -> String {
        let mut s = format!(
            "(c={}; d={:?}; a={:?}; b={:?}",
            self.nf.c,
            self.nf.alpha(),
            self.nf.a,
            self.nf.b
        );
        if let Some(m) = self.shift {
            s.push_str(&format!("; m={m}"));
        }
        if let Some(u) = &self.unit {
            let terms: Vec<String> = u.iter().map(|d| d.to_string()).collect();
            s.push_str(&format!("; u={} mod w^{}", terms.join(","), u.len()));
        }
        s.push(')');
        s
    }
}

impl fmt::Display for RefinedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

fn digits_mod(u: &FieldElem, len: i64) -> Vec<u32> {
    let t = u.series_truncate(len);
    (0..len).map(|e| t.coeff(e)).collect()
}

pub fn refined_key_from(nf: NormalForm, wit: &Witness, level: Level) -> RefinedKey {
    let cond = conductor_of(&nf) as i64;
    match level {
        Level::H => RefinedKey { nf, shift: None, unit: None },
        Level::H0 => RefinedKey { nf, shift: Some(wit.shift), unit: None },
        Level::H1 => {
            let unit = (cond >= 1).then(|| digits_mod(&wit.unit, 1));
            RefinedKey { nf, shift: Some(wit.shift), unit }
        }
        Level::HDer => {
            let unit = (cond >= 1).then(|| digits_mod(&wit.unit, cond));
            RefinedKey { nf, shift: Some(wit.shift), unit }
        }
    }
}

pub fn refined_key(g: &GroupElement, level: Level) -> Result<RefinedKey> {
    let (nf, wit) = normal_form(g)?;
    Ok(refined_key_from(nf, &wit, level))
}

/// The projections `phi` (level `H^der`) and `phi_0` (level `H_0`).
pub fn project(x: &FormalSum<PairKey>, level: Level, q: u32) -> Result<FormalSum<RefinedKey>> {
    x.try_flat_map(|key| {
        let g = GroupElement::from_key(key, q);
        Ok(FormalSum::single(refined_key(&g, level)?, coef(1)))
    })
}

/// Left translation by `h in H` on a sum of refined keys.
pub fn left_translate(h: &GroupElement, x: &FormalSum<RefinedKey>) -> Result<FormalSum<RefinedKey>> {
    if embed_iota(&h.g2) != h.g1 {
        return Err(Error::Domain("translating element is not in H".into()));
    }
    let d = h.g2.det();
    let v = d.ord().ok_or_else(|| Error::Domain("singular translate".into()))?;
    let u = d.unit_part();
    Ok(x.map_keys(|k| k.translate(v, &u)))
}

/// `Delta(diag(lambda, 1, ..., 1))`.
pub fn unit_translate(n: usize, q: u32, lambda: u32) -> GroupElement {
    let mut d = vec![FieldElem::one(q); n];
    d[0] = FieldElem::constant(q, lambda as i64);
    GroupElement::delta(&Mat::diag(q, &d))
}

/// Fails unless the coefficients of `x` are constant along `H_1`-orbits.
pub fn check_h1_invariant(x: &FormalSum<RefinedKey>, q: u32) -> Result<()> {
    let mut groups: BTreeMap<(NormalForm, Option<i64>, u32), (usize, Vec<Coef>)> = BTreeMap::new();
    for (k, c) in x.iter() {
        let Some(u) = &k.unit else { continue };
        let e = groups.entry((k.nf.clone(), k.shift, u[0])).or_insert((u.len(), Vec::new()));
        e.1.push(*c);
    }
    for ((nf, shift, digit), (len, coeffs)) in groups {
        let expected = (q as usize).pow(len as u32 - 1);
        let constant = coeffs.windows(2).all(|w| w[0] == w[1]);
        if coeffs.len() != expected || !constant {
            return Err(Error::Invariance(format!(
                "class {nf} shift {shift:?} digit {digit}: {} of {expected} unit classes present",
                coeffs.len()
            )));
        }
    }
    Ok(())
}

/// `Tr_{1,0}`: sum of the translates by `Delta(diag(lambda, 1, ..., 1))`, `lambda in F_q^x`.
pub fn trace_1_0(x: &FormalSum<RefinedKey>, n: usize, q: u32) -> Result<FormalSum<RefinedKey>> {
    check_h1_invariant(x, q)?;
    let mut out = FormalSum::new();
    for lambda in 1..q {
        out.add_assign(&left_translate(&unit_translate(n, q, lambda), x)?);
    }
    Ok(out)
}

/// All unit classes modulo `w^len` (digit lists with nonzero constant digit).
pub fn unit_classes(q: u32, len: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (q as u64).pow(len);
    for code in 0..total {
        let mut c = code;
        let digits: Vec<u32> = (0..len)
            .map(|_| {
                let d = (c % q as u64) as u32;
                c /= q as u64;
                d
            })
            .collect();
        if len == 0 || digits[0] != 0 {
            out.push(digits);
        }
    }
    out
}

/// Group a sum of refined keys by their `H_0` image.
pub fn group_by_h0(x: &FormalSum<RefinedKey>) -> BTreeMap<RefinedKey, Vec<(RefinedKey, Coef)>> {
    let mut out: BTreeMap<RefinedKey, Vec<(RefinedKey, Coef)>> = BTreeMap::new();
    for (k, c) in x.iter() {
        if c.is_zero() {
            continue;
        }
        out.entry(k.level_h0()).or_default().push((k.clone(), *c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_k;
    use rand::SeedableRng;

    fn w(q: u32, k: i64) -> FieldElem {
        FieldElem::uniformizer_pow(q, k)
    }

    #[test]
    fn identity_and_frob() {
        let q = 3;
        for n in 1..=3 {
            let (nf, wit) = normal_form(&GroupElement::identity(q, n)).unwrap();
            assert_eq!(nf, NormalForm::trivial(n));
            assert_eq!(wit.shift, 0);
            let mut d = vec![0; n];
            d[0] = 1;
            let frob = GroupElement::delta(&Mat::diag_pow(q, &d));
            let (nf, wit) = normal_form(&frob).unwrap();
            assert_eq!(nf, NormalForm::trivial(n));
            assert_eq!(wit.shift, 1);
        }
    }

    #[test]
    fn unipotent_times_frob_n1() {
        let q = 3;
        let g1 = Mat::from_rows(q, vec![vec![w(q, 1), FieldElem::one(q)], vec![FieldElem::zero(q), FieldElem::one(q)]])
            .unwrap();
        let g = GroupElement::new(g1, Mat::diag_pow(q, &[1])).unwrap();
        let (nf, wit) = normal_form(&g).unwrap();
        assert_eq!(nf, NormalForm { c: 0, a: vec![1], b: vec![1] });
        assert_eq!(wit.shift, 0);
        assert_eq!(conductor_of(&nf), 1);
        assert!(verify_witness(&g, &nf, &wit).unwrap());
        // same (c, a-b) as the identity, different class
        assert_eq!(class_invariant(&nf), class_invariant(&NormalForm::trivial(1)));
    }

    #[test]
    fn stabilizer_cases() {
        assert_eq!(stabilizer_det(&[0, 3], &[1, 1]), StabDet::AllUnits);
        assert_eq!(stabilizer_det(&[3, 2], &[1, 0]), StabDet::AllUnits);
        assert_eq!(stabilizer_det(&[2], &[5]), StabDet::Congruence(2));
    }

    #[test]
    fn class_invariant_example() {
        let nf = NormalForm { c: 0, a: vec![2, 0], b: vec![1, 0] };
        assert_eq!(class_invariant(&nf), ClassInvariant { c: 0, d: vec![1, 0] });
    }

    #[test]
    fn reduced_representative_is_fixed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let q = 2;
        for _ in 0..50 {
            let n = 2;
            let k1 = random_k(&mut rng, q, n + 1, 2);
            let d: Vec<i64> = (0..=n).map(|_| rand::Rng::gen_range(&mut rng, -1..3)).collect();
            let g = GroupElement::new(k1.mul(&Mat::diag_pow(q, &d)).mul(&random_k(&mut rng, q, n + 1, 2)), random_k(&mut rng, q, n, 2))
                .unwrap();
            let (nf, wit) = normal_form(&g).unwrap();
            assert!(nf.is_reduced(), "{nf}");
            assert!(verify_witness(&g, &nf, &wit).unwrap());
            let (nf2, _) = normal_form(&nf.representative(q)).unwrap();
            assert_eq!(nf, nf2);
        }
    }

    #[test]
    fn unit_class_enumeration() {
        assert_eq!(unit_classes(3, 2).len(), 6);
        assert_eq!(unit_classes(2, 0), vec![Vec::<u32>::new()]);
    }
}
