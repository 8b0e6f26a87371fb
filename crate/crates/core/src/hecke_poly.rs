//! The Hecke polynomial `H_w(z) = prod_{i,j} (z - t x_i y_j)` for `GL(n+1) x GL(n)`,
//! rewritten in the spherical Hecke generators `T_{k,V}`, `T_{k,W}`.
//!
//! `x_1..x_{n+1}` and `y_1..y_n` are Satake parameters with elementary symmetric
//! functions `X_k`, `Y_k`, and `t = s^{2n-1}` with `s^2 = q`. The dictionary is
//! `X_k -> s^{-(n+1-k)k} T_{k,V}` and `Y_k -> s^{-(n-k)k} T_{k,W}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::coset::{coef, Coef, TMonomial};
use crate::error::{Error, Result};
use crate::sym::{newton_girard, reduce_bisymmetric, MPoly};

/// Laurent polynomial in `s` with integer coefficients.
pub type SLaurent = BTreeMap<i64, i128>;

/// A polynomial in `z` whose coefficients are `Z`-combinations of monomials in
/// `X_1..X_{n+1}, Y_1..Y_n, t` (variables in that order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    pub n: usize,
    /// `coeffs[j]` multiplies `z^j`.
    pub coeffs: Vec<MPoly>,
}

impl SymPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at numeric `X`, `Y`, `t`, `z` modulo a prime.
    pub fn eval_mod(&self, xs: &[u64], ys: &[u64], t: u64, z: u64, p: u64) -> u64 {
        let mut point: Vec<u64> = xs.to_vec();
        point.extend_from_slice(ys);
        point.push(t);
        let mut acc = 0u64;
        let mut zp = 1u64;
        for c in &self.coeffs {
            acc = (acc + c.eval_mod(&point, p) * zp) % p;
            zp = zp * (z % p) % p;
        }
        acc
    }
}

fn num_vars(n: usize) -> usize {
    2 * n + 2
}

/// Expansion via power sums: `p_r({x_i y_j}) = p_r(x) p_r(y)`, each written through
/// Newton–Girard, then Newton's identities for the elementary functions.
pub fn expand_product(n: usize) -> Result<SymPoly> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let a = n + 1;
    let nv = num_vars(n);
    let big_n = n * (n + 1);
    let mut power_sums = vec![MPoly::zero(nv)];
    for r in 1..=big_n {
        let px = newton_girard(r, a).embed(nv, 0);
        let py = newton_girard(r, n).embed(nv, a);
        power_sums.push(px.mul(&py));
    }
    let mut e = vec![MPoly::one(nv)];
    for k in 1..=big_n {
        let mut acc = MPoly::zero(nv);
        for i in 1..=k {
            let term = e[k - i].mul(&power_sums[i]);
            acc = if (i - 1) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        e.push(acc.scale(Coef::new(1, k as i128)));
    }
    let mut coeffs = vec![MPoly::zero(nv); big_n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        if !ek.is_integral() {
            return Err(Error::Internal(format!("non-integral elementary function e_{k}")));
        }
        let mut texp = vec![0u32; nv];
        texp[nv - 1] = k as u32;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs[big_n - k] = ek.mul(&MPoly::monomial(texp, coef(sign)));
    }
    Ok(SymPoly { n, coeffs })
}

/// Reference expansion: multiply out in raw variables and reduce each coefficient
/// by leading-monomial elimination.
pub fn expand_product_raw(n: usize) -> Result<SymPoly> {
    if n == 0 || n > 3 {
        return Err(Error::Domain("raw expansion supports 1 <= n <= 3".into()));
    }
    let a = n + 1;
    let raw_vars = a + n;
    let big_n = n * (n + 1);
    // coefficients of the product in u = -t z^{-1}-grading: e_k of all x_i y_j
    let mut ek = vec![MPoly::one(raw_vars)];
    for i in 0..a {
        for j in 0..n {
            let mut exps = vec![0u32; raw_vars];
            exps[i] = 1;
            exps[a + j] = 1;
            let v = MPoly::monomial(exps, Coef::one());
            let mut next = vec![MPoly::zero(raw_vars); ek.len() + 1];
            for (k, p) in ek.iter().enumerate() {
                next[k] = next[k].add(p);
                next[k + 1] = next[k + 1].add(&p.mul(&v));
            }
            ek = next;
        }
    }
    let nv = num_vars(n);
    let mut coeffs = vec![MPoly::zero(nv); big_n + 1];
    for (k, p) in ek.iter().enumerate() {
        let reduced = reduce_bisymmetric(p, a, n)?.embed(nv, 0);
        let mut texp = vec![0u32; nv];
        texp[nv - 1] = k as u32;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs[big_n - k] = reduced.mul(&MPoly::monomial(texp, coef(sign)));
    }
    Ok(SymPoly { n, coeffs })
}

/// Coefficient ring element: `Z[s, s^-1]`-combination of `T`-monomials.
pub type HeckeCoeff = BTreeMap<TMonomial, SLaurent>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckePolynomial {
    pub n: usize,
    /// `coeffs[j]` multiplies `z^j`.
    pub coeffs: Vec<HeckeCoeff>,
}

fn add_slaurent(into: &mut SLaurent, e: i64, c: i128) {
    if c == 0 {
        return;
    }
    let v = into.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        into.remove(&e);
    }
}

fn add_coeff_term(into: &mut HeckeCoeff, mono: TMonomial, e: i64, c: i128) {
    if c == 0 {
        return;
    }
    let entry = into.entry(mono.clone()).or_default();
    add_slaurent(entry, e, c);
    if entry.is_empty() {
        into.remove(&mono);
    }
}

fn mul_coeffs(x: &HeckeCoeff, y: &HeckeCoeff) -> HeckeCoeff {
    let mut out = HeckeCoeff::new();
    for (m1, l1) in x {
        for (m2, l2) in y {
            let m = m1.mul(m2);
            for (e1, c1) in l1 {
                for (e2, c2) in l2 {
                    add_coeff_term(&mut out, m.clone(), e1 + e2, c1 * c2);
                }
            }
        }
    }
    out
}

fn add_coeffs(x: &HeckeCoeff, y: &HeckeCoeff, sign: i128) -> HeckeCoeff {
    let mut out = x.clone();
    for (m, l) in y {
        for (e, c) in l {
            add_coeff_term(&mut out, m.clone(), *e, sign * c);
        }
    }
    out
}

/// Apply the dictionary and `t = s^{2n-1}`; every `s`-exponent must come out even.
pub fn satake_substitute(p: &SymPoly) -> Result<HeckePolynomial> {
    let n = p.n;
    let a = n + 1;
    let mut coeffs = Vec::with_capacity(p.coeffs.len());
    for (j, c) in p.coeffs.iter().enumerate() {
        let mut out = HeckeCoeff::new();
        for (exps, val) in c.terms() {
            if !val.is_integer() {
                return Err(Error::Coefficient(format!("non-integral coefficient {val} at z^{j}")));
            }
            let mut s_exp = exps[2 * n + 1] as i64 * (2 * n as i64 - 1);
            for k in 1..=a {
                s_exp -= exps[k - 1] as i64 * ((a - k) * k) as i64;
            }
            for k in 1..=n {
                s_exp -= exps[a + k - 1] as i64 * ((n - k) * k) as i64;
            }
            if s_exp % 2 != 0 {
                return Err(Error::Normalization(format!("odd power s^{s_exp} at z^{j}")));
            }
            let mono = TMonomial { v: exps[..a].to_vec(), w: exps[a..2 * n + 1].to_vec() };
            add_coeff_term(&mut out, mono, s_exp, *val.numer());
        }
        coeffs.push(out);
    }
    Ok(HeckePolynomial { n, coeffs })
}

pub fn build_hecke_polynomial(n: usize) -> Result<HeckePolynomial> {
    if !(1..=4).contains(&n) {
        return Err(Error::Domain(format!("n = {n} outside 1..=4")));
    }
    satake_substitute(&expand_product(n)?)
}

impl HeckePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        let top = &self.coeffs[self.degree()];
        top.len() == 1
            && top.get(&TMonomial::one(self.n)).is_some_and(|l| l.len() == 1 && l.get(&0) == Some(&1))
    }

    pub fn has_even_s_powers(&self) -> bool {
        self.coeffs.iter().all(|c| c.values().all(|l| l.keys().all(|e| e % 2 == 0)))
    }

    /// `s^2 -> q`.
    pub fn specialize(&self, q: u32) -> Result<SpecializedPoly> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            let mut terms = Vec::new();
            for (mono, l) in c {
                let mut v = Coef::zero();
                for (&e, &k) in l {
                    if e % 2 != 0 {
                        return Err(Error::Normalization(format!("odd power s^{e} at z^{j}")));
                    }
                    v += coef(k) * q_pow(q, e / 2);
                }
                if !v.is_zero() {
                    terms.push((mono.clone(), v));
                }
            }
            coeffs.push(terms);
        }
        Ok(SpecializedPoly { n: self.n, q, coeffs })
    }

    /// One line per power of `z`, highest first, in the fixture format.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for j in (0..self.coeffs.len()).rev() {
            let _ = writeln!(out, "z^{j} : {}", render_coeff(&self.coeffs[j]));
        }
        out
    }

    pub fn parse_fixture(n: usize, text: &str) -> Result<HeckePolynomial> {
        let mut coeffs: BTreeMap<usize, HeckeCoeff> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: missing ':'", lineno + 1)))?;
            let j: usize = lhs
                .trim()
                .strip_prefix("z^")
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad power {lhs:?}", lineno + 1)))?;
            let c = CoeffParser::new(n, rhs)?.parse_all()?;
            coeffs.insert(j, c);
        }
        let deg = coeffs.keys().max().copied().unwrap_or(0);
        let coeffs = (0..=deg).map(|j| coeffs.remove(&j).unwrap_or_default()).collect();
        Ok(HeckePolynomial { n, coeffs })
    }
}

fn q_pow(q: u32, e: i64) -> Coef {
    let base = coef(q as i128);
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        Coef::one() / num_traits::pow(base, (-e) as usize)
    }
}

/// Order used in fixtures: `V`-exponents compared from the highest index down,
/// then `W`-exponents from the lowest index up, larger first in both.
pub fn fixture_order(x: &TMonomial, y: &TMonomial) -> Ordering {
    for k in (0..x.v.len()).rev() {
        match y.v[k].cmp(&x.v[k]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    for k in 0..x.w.len() {
        match y.w[k].cmp(&x.w[k]) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

fn render_s_power(e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some("s".into()),
        e => Some(format!("s^{e}")),
    }
}

fn render_coeff(c: &HeckeCoeff) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut monos: Vec<&TMonomial> = c.keys().collect();
    monos.sort_by(|a, b| fixture_order(a, b));
    let mut out = String::new();
    for (idx, mono) in monos.iter().enumerate() {
        let l = &c[*mono];
        let (negative, body) = if l.len() == 1 {
            let (&e, &k) = l.iter().next().unwrap();
            let mut parts = Vec::new();
            if k.abs() != 1 {
                parts.push(k.abs().to_string());
            }
            parts.extend(render_s_power(e));
            if !mono.is_one() {
                parts.push(mono.to_string());
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            (k < 0, parts.join("*"))
        } else {
            let inner: Vec<String> = l
                .iter()
                .map(|(&e, &k)| match render_s_power(e) {
                    None => k.to_string(),
                    Some(s) if k == 1 => s,
                    Some(s) => format!("{k}*{s}"),
                })
                .collect();
            let mut body = format!("({})", inner.join(" + ").replace("+ -", "- "));
            if !mono.is_one() {
                body.push('*');
                body.push_str(&mono.to_string());
            }
            (false, body)
        };
        match (idx, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

struct CoeffParser {
    n: usize,
    chars: Vec<char>,
    pos: usize,
}

impl CoeffParser {
    fn new(n: usize, text: &str) -> Result<Self> {
        Ok(CoeffParser { n, chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<HeckeCoeff> {
        let v = self.sum()?;
        if self.pos != self.chars.len() {
            return Err(Error::Parse(format!("trailing input at {}", self.pos)));
        }
        Ok(v)
    }

    fn constant(&self, e: i64, c: i128) -> HeckeCoeff {
        let mut out = HeckeCoeff::new();
        add_coeff_term(&mut out, TMonomial::one(self.n), e, c);
        out
    }

    fn sum(&mut self) -> Result<HeckeCoeff> {
        let mut sign = 1;
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -1;
        }
        let first = self.product()?;
        let mut acc = add_coeffs(&HeckeCoeff::new(), &first, sign);
        while let Some(c) = self.peek() {
            let sign = match c {
                '+' => 1,
                '-' => -1,
                _ => break,
            };
            self.pos += 1;
            let t = self.product()?;
            acc = add_coeffs(&acc, &t, sign);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<HeckeCoeff> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = mul_coeffs(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() == Some('^') {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<HeckeCoeff> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('s') => {
                self.pos += 1;
                let e = self.exponent()?;
                Ok(self.constant(e, 1))
            }
            Some('T') => {
                self.pos += 1;
                let k = self.int()?;
                let factor = self.peek();
                self.pos += 1;
                let e = self.exponent()?;
                if k < 1 || e < 0 {
                    return Err(Error::Parse(format!("bad generator T{k}")));
                }
                let mut mono = TMonomial::one(self.n);
                let slot = match factor {
                    Some('V') if (k as usize) <= self.n + 1 => &mut mono.v[k as usize - 1],
                    Some('W') if (k as usize) <= self.n => &mut mono.w[k as usize - 1],
                    _ => return Err(Error::Parse(format!("bad generator T{k}{factor:?}"))),
                };
                *slot = e as u32;
                let mut out = HeckeCoeff::new();
                add_coeff_term(&mut out, mono, 0, 1);
                Ok(out)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(self.constant(0, v as i128))
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

/// `H_w` after `s^2 -> q`: exact rational coefficients per `T`-monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedPoly {
    pub n: usize,
    pub q: u32,
    /// `coeffs[j]` multiplies `z^j`.
    pub coeffs: Vec<Vec<(TMonomial, Coef)>>,
}

impl SpecializedPoly {
    /// `P(z) -> P(f z)`.
    pub fn rescale_variable(&self, f: Coef) -> SpecializedPoly {
        let mut pw = Coef::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.iter().map(|(m, v)| (m.clone(), v * pw)).filter(|(_, v)| !v.is_zero()).collect());
            pw *= f;
        }
        SpecializedPoly { n: self.n, q: self.q, coeffs }
    }

    /// The normalized polynomial `H_w(q^{n-1} z)`.
    pub fn tilde(&self) -> SpecializedPoly {
        self.rescale_variable(q_pow(self.q, self.n as i64 - 1))
    }

    /// Largest power of `q` in any coefficient denominator.
    pub fn denominator_q_power(&self) -> u32 {
        let mut worst = 0;
        for c in self.coeffs.iter().flatten() {
            let mut d = *c.1.denom();
            let mut e = 0;
            while d % self.q as i128 == 0 {
                d /= self.q as i128;
                e += 1;
            }
            worst = worst.max(e);
        }
        worst
    }

    pub fn max_abs_coeff(&self) -> Coef {
        self.coeffs.iter().flatten().map(|(_, v)| v.abs()).fold(Coef::zero(), |a, b| a.max(b))
    }

    /// One line per power of `z`, highest first, monomials in fixture order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for j in (0..self.coeffs.len()).rev() {
            let mut terms = self.coeffs[j].clone();
            terms.sort_by(|a, b| fixture_order(&a.0, &b.0));
            let mut line = String::new();
            for (i, (m, c)) in terms.iter().enumerate() {
                let neg = *c < Coef::zero();
                let a = c.abs();
                if i == 0 {
                    line.push_str(if neg { "-" } else { "" });
                } else {
                    line.push_str(if neg { " - " } else { " + " });
                }
                let num = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
                match (a.is_one(), m.is_one()) {
                    (true, true) => line.push('1'),
                    (true, false) => line.push_str(&m.to_string()),
                    (false, true) => line.push_str(&num),
                    (false, false) => line.push_str(&format!("{num}*{m}")),
                }
            }
            if line.is_empty() {
                line.push('0');
            }
            out.push_str(&format!("z^{j} : {line}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_polynomial() {
        let h = build_hecke_polynomial(1).unwrap();
        assert_eq!(h.to_fixture(), "z^2 : 1\nz^1 : -T1V*T1W\nz^0 : s^2*T2V*T1W^2\n");
    }

    #[test]
    fn n2_leading_and_constant_lines() {
        let h = build_hecke_polynomial(2).unwrap();
        let f = h.to_fixture();
        let lines: Vec<&str> = f.lines().collect();
        assert_eq!(lines[0], "z^6 : 1");
        assert_eq!(lines[1], "z^5 : -T1V*T1W");
        assert_eq!(lines[2], "z^4 : s^2*T2V*T1W^2 - 2*s^4*T2V*T2W + s^2*T1V^2*T2W");
        assert_eq!(lines[6], "z^0 : s^18*T3V^2*T2W^3");
    }

    #[test]
    fn raw_and_power_sum_routes_agree() {
        for n in 1..=2 {
            assert_eq!(expand_product(n).unwrap(), expand_product_raw(n).unwrap());
        }
    }

    #[test]
    fn fixture_round_trip() {
        for n in 1..=2 {
            let h = build_hecke_polynomial(n).unwrap();
            assert_eq!(HeckePolynomial::parse_fixture(n, &h.to_fixture()).unwrap(), h);
        }
    }
}
