//! Exact arithmetic in the local field `F = F_q((w))`.
//!
//! Elements are stored as `w^shift * num(w) / den(w)` where `num` and `den`
//! are polynomials over the prime field `F_q`, `num(0) != 0`, `den(0) == 1`
//! and `gcd(num, den) == 1`. This representation is canonical, so derived
//! equality and hashing are semantic.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Valuation of a field element; zero has valuation `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// The residue field `F_q` for a prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueField {
    q: u32,
}

impl ResidueField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Domain(format!("residue characteristic {q} is not prime")));
        }
        Ok(ResidueField { q })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "inverse of zero residue");
        let mut base = a as u64 % self.q as u64;
        let mut exp = self.q as u64 - 2;
        let m = self.q as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }

    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// dense polynomial helpers over F_q; index = exponent, no trailing zeros

fn trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_mul(fq: ResidueField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() == 1 && a[0] == 1 {
        return b.to_vec();
    }
    if b.len() == 1 && b[0] == 1 {
        return a.to_vec();
    }
    let m = fq.q as u64;
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u64 * y as u64) % m;
        }
    }
    let mut out: Vec<u32> = acc.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

fn poly_add_shifted(fq: ResidueField, a: &[u32], b: &[u32], shift_b: usize) -> Vec<u32> {
    let len = a.len().max(b.len() + shift_b);
    let mut out = vec![0u32; len];
    out[..a.len()].copy_from_slice(a);
    for (j, &y) in b.iter().enumerate() {
        out[j + shift_b] = fq.add(out[j + shift_b], y);
    }
    trim(&mut out);
    out
}

fn poly_scale(fq: ResidueField, a: &[u32], c: u32) -> Vec<u32> {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| fq.mul(x, c)).collect()
}

/// Division with remainder; `b` must be nonzero.
fn poly_divrem(fq: ResidueField, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = fq.inv(*b.last().unwrap());
    let mut quot = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = fq.mul(*r.last().unwrap(), lead_inv);
        quot[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[j + shift] = fq.sub(r[j + shift], fq.mul(c, y));
        }
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

fn poly_gcd(fq: ResidueField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = poly_divrem(fq, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// First `len` coefficients of `1/den` as a power series; requires `den[0] == 1`.
fn series_inverse(fq: ResidueField, den: &[u32], len: usize) -> Vec<u32> {
    let mut inv = vec![0u32; len];
    if len == 0 {
        return inv;
    }
    inv[0] = 1;
    for i in 1..len {
        let mut acc = 0u32;
        for j in 1..den.len().min(i + 1) {
            acc = fq.add(acc, fq.mul(den[j], inv[i - j]));
        }
        inv[i] = fq.neg(acc);
    }
    inv
}

// ---------------------------------------------------------------------------

/// A Laurent polynomial in `w` over `F_q` with canonical support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    q: u32,
    /// Exponent of `coeffs[0]`; zero polynomial has `val == 0` and no coefficients.
    val: i64,
    coeffs: Vec<u32>,
}

impl LaurentPoly {
    pub fn zero(q: u32) -> Self {
        LaurentPoly { q, val: 0, coeffs: Vec::new() }
    }

    /// Builds `sum coeffs[i] * w^(val + i)`, canonicalizing the support.
    pub fn new(q: u32, val: i64, coeffs: Vec<u32>) -> Self {
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % q).collect();
        trim(&mut coeffs);
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => LaurentPoly::zero(q),
            Some(k) => LaurentPoly { q, val: val + k as i64, coeffs: coeffs.split_off(k) },
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.val + i as i64, c))
    }

    pub fn coeff(&self, exp: i64) -> u32 {
        if self.is_zero() || exp < self.val {
            return 0;
        }
        self.coeffs.get((exp - self.val) as usize).copied().unwrap_or(0)
    }

    pub fn to_field(&self) -> FieldElem {
        FieldElem::from_laurent(self.clone())
    }

    fn render(&self, out: &mut String) {
        if self.is_zero() {
            out.push('0');
            return;
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                out.push('+');
            }
            first = false;
            match (c, e) {
                (c, 0) => out.push_str(&c.to_string()),
                (1, 1) => out.push('w'),
                (1, e) => out.push_str(&format!("w^{e}")),
                (c, 1) => out.push_str(&format!("{c}*w")),
                (c, e) => out.push_str(&format!("{c}*w^{e}")),
            }
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(&mut s);
        f.write_str(&s)
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.is_zero(), self.val, &self.coeffs).cmp(&(
            other.q,
            other.is_zero(),
            other.val,
            &other.coeffs,
        ))
    }
}

/// An element of `F_q((w))` represented as a reduced fraction of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    q: u32,
    shift: i64,
    num: Vec<u32>,
    den: Vec<u32>,
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.num.is_empty(), self.shift, &self.num, &self.den).cmp(&(
            other.q,
            other.num.is_empty(),
            other.shift,
            &other.num,
            &other.den,
        ))
    }
}

impl FieldElem {
    pub fn zero(q: u32) -> Self {
        FieldElem { q, shift: 0, num: Vec::new(), den: vec![1] }
    }

    pub fn one(q: u32) -> Self {
        FieldElem { q, shift: 0, num: vec![1], den: vec![1] }
    }

    /// The residue `c mod q` as a constant.
    pub fn constant(q: u32, c: i64) -> Self {
        let r = c.rem_euclid(q as i64) as u32;
        if r == 0 {
            Self::zero(q)
        } else {
            FieldElem { q, shift: 0, num: vec![r], den: vec![1] }
        }
    }

    /// `w^k`.
    pub fn uniformizer_pow(q: u32, k: i64) -> Self {
        FieldElem { q, shift: k, num: vec![1], den: vec![1] }
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        if p.is_zero() {
            return Self::zero(p.q);
        }
        FieldElem { q: p.q, shift: p.val, num: p.coeffs, den: vec![1] }
    }

    /// `numerator / denominator` for arbitrary Laurent polynomials.
    pub fn from_fraction(numerator: &LaurentPoly, denominator: &LaurentPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Self::from_laurent(numerator.clone()).div(&Self::from_laurent(denominator.clone()))
    }

    fn build(q: u32, shift: i64, mut num: Vec<u32>, mut den: Vec<u32>) -> Self {
        let fq = ResidueField { q };
        trim(&mut num);
        if num.is_empty() {
            return Self::zero(q);
        }
        let mut shift = shift;
        let lead = num.iter().position(|&c| c != 0).unwrap();
        if lead > 0 {
            num.drain(..lead);
            shift += lead as i64;
        }
        trim(&mut den);
        let dlead = den.iter().position(|&c| c != 0).expect("zero denominator");
        if dlead > 0 {
            den.drain(..dlead);
            shift -= dlead as i64;
        }
        if !(den.len() == 1) {
            let g = poly_gcd(fq, &num, &den);
            if g.len() > 1 {
                num = poly_divrem(fq, &num, &g).0;
                den = poly_divrem(fq, &den, &g).0;
            }
        }
        let d0 = den[0];
        if d0 != 1 {
            let inv = fq.inv(d0);
            num = poly_scale(fq, &num, inv);
            den = poly_scale(fq, &den, inv);
        }
        FieldElem { q, shift, num, den }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField { q: self.q }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num == [1] && self.den == [1]
    }

    /// True when the element is a Laurent polynomial (unit denominator).
    pub fn is_laurent(&self) -> bool {
        self.den.len() == 1
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.shift)
        }
    }

    /// Finite valuation, or `None` for zero.
    pub fn ord(&self) -> Option<i64> {
        self.valuation().finite()
    }

    /// True when the element lies in the valuation ring.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.shift == 0
    }

    pub fn numerator(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero(self.q);
        }
        LaurentPoly { q: self.q, val: self.shift, coeffs: self.num.clone() }
    }

    pub fn denominator(&self) -> LaurentPoly {
        LaurentPoly { q: self.q, val: 0, coeffs: self.den.clone() }
    }

    /// Leading (lowest-order) residue coefficient; zero for zero.
    pub fn leading_coeff(&self) -> u32 {
        self.num.first().copied().unwrap_or(0)
    }

    /// `x / w^ord(x)`, a unit of the valuation ring. Panics on zero.
    pub fn unit_part(&self) -> FieldElem {
        assert!(!self.is_zero(), "unit part of zero");
        FieldElem { q: self.q, shift: 0, num: self.num.clone(), den: self.den.clone() }
    }

    /// Multiply by `w^k`.
    pub fn shifted(&self, k: i64) -> FieldElem {
        if self.is_zero() {
            return self.clone();
        }
        FieldElem { shift: self.shift + k, ..self.clone() }
    }

    pub fn neg(&self) -> FieldElem {
        if self.is_zero() {
            return self.clone();
        }
        let fq = self.residue_field();
        FieldElem {
            q: self.q,
            shift: self.shift,
            num: self.num.iter().map(|&c| fq.neg(c)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        debug_assert_eq!(self.q, other.q);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let fq = self.residue_field();
        let (lo, hi) = if self.shift <= other.shift { (self, other) } else { (other, self) };
        let gap = (hi.shift - lo.shift) as usize;
        if lo.den == hi.den {
            let num = poly_add_shifted(fq, &lo.num, &hi.num, gap);
            if lo.den.len() == 1 {
                return Self::build(self.q, lo.shift, num, vec![1]);
            }
            return Self::build(self.q, lo.shift, num, lo.den.clone());
        }
        let a = poly_mul(fq, &lo.num, &hi.den);
        let b = poly_mul(fq, &hi.num, &lo.den);
        let num = poly_add_shifted(fq, &a, &b, gap);
        let den = poly_mul(fq, &lo.den, &hi.den);
        Self::build(self.q, lo.shift, num, den)
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        debug_assert_eq!(self.q, other.q);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.q);
        }
        let fq = self.residue_field();
        let shift = self.shift + other.shift;
        if self.den.len() == 1 && other.den.len() == 1 {
            // product of polynomials with nonzero constant terms keeps a nonzero constant term
            let num = poly_mul(fq, &self.num, &other.num);
            return FieldElem { q: self.q, shift, num, den: vec![1] };
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = poly_gcd(fq, &self.num, &other.den);
        let g2 = poly_gcd(fq, &other.num, &self.den);
        let n1 = if g1.len() > 1 { poly_divrem(fq, &self.num, &g1).0 } else { self.num.clone() };
        let d2 = if g1.len() > 1 { poly_divrem(fq, &other.den, &g1).0 } else { other.den.clone() };
        let n2 = if g2.len() > 1 { poly_divrem(fq, &other.num, &g2).0 } else { other.num.clone() };
        let d1 = if g2.len() > 1 { poly_divrem(fq, &self.den, &g2).0 } else { self.den.clone() };
        let num = poly_mul(fq, &n1, &n2);
        let den = poly_mul(fq, &d1, &d2);
        let d0 = den[0];
        if d0 == 1 {
            FieldElem { q: self.q, shift, num, den }
        } else {
            let inv = fq.inv(d0);
            FieldElem { q: self.q, shift, num: poly_scale(fq, &num, inv), den: poly_scale(fq, &den, inv) }
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let fq = self.residue_field();
        let c = fq.inv(self.num[0]);
        Ok(FieldElem {
            q: self.q,
            shift: -self.shift,
            num: poly_scale(fq, &self.den, c),
            den: poly_scale(fq, &self.num, c),
        })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&other.inv()?))
    }

    /// The Laurent polynomial congruent to `self` modulo `w^n O`, supported on `[val, n)`.
    pub fn series_truncate(&self, n: i64) -> LaurentPoly {
        if self.is_zero() || n <= self.shift {
            return LaurentPoly::zero(self.q);
        }
        let len = (n - self.shift) as usize;
        if self.den.len() == 1 {
            let mut c = self.num.clone();
            c.truncate(len);
            return LaurentPoly::new(self.q, self.shift, c);
        }
        let fq = self.residue_field();
        let inv = series_inverse(fq, &self.den, len);
        let mut prod = poly_mul(fq, &self.num, &inv);
        prod.truncate(len);
        LaurentPoly::new(self.q, self.shift, prod)
    }

    /// `self mod w^n O` as a field element (the truncated Laurent polynomial).
    pub fn reduce_mod(&self, n: i64) -> FieldElem {
        FieldElem::from_laurent(self.series_truncate(n))
    }

    /// Parse the textual syntax produced by `Display`, e.g. `(1+2*w)/(w^2)`.
    pub fn parse(q: u32, text: &str) -> Result<FieldElem> {
        ResidueField::new(q)?;
        let mut p = Parser { q, chars: text.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("trailing input in {text:?} at {}", p.pos)));
        }
        Ok(v)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let top = LaurentPoly::new(self.q, self.shift.max(0), self.num.clone());
        let bottom = LaurentPoly::new(self.q, (-self.shift).max(0), self.den.clone());
        let mut s = String::new();
        if bottom.val == 0 && bottom.coeffs == [1] {
            top.render(&mut s);
        } else {
            s.push('(');
            top.render(&mut s);
            s.push_str(")/(");
            bottom.render(&mut s);
            s.push(')');
        }
        f.write_str(&s)
    }
}

struct Parser {
    q: u32,
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<FieldElem> {
        let mut acc = self.power()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                '/' => {
                    self.pos += 1;
                    acc = acc.div(&self.power()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.signed_int()?;
            return pow(&base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('w') => {
                self.pos += 1;
                Ok(FieldElem::uniformizer_pow(self.q, 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.unsigned_int()?;
                Ok(FieldElem::constant(self.q, (n % self.q as u64) as i64))
            }
            Some(c) => Err(Error::Parse(format!("unexpected character {c:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn unsigned_int(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u64>().map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.unsigned_int()? as i64;
        Ok(if neg { -v } else { v })
    }
}

pub fn pow(base: &FieldElem, e: i64) -> Result<FieldElem> {
    let mut b = if e < 0 { base.inv()? } else { base.clone() };
    let mut k = e.unsigned_abs();
    let mut acc = FieldElem::one(base.q());
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&b);
        }
        b = b.mul(&b);
        k >>= 1;
    }
    Ok(acc)
}
