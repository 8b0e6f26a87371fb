//! Unit indices of the local orders `O_c = O_F + w^c O_E` and the Galois degree count.

use std::collections::HashSet;
use std::time::Instant;

use num_traits::One;
use serde_json::json;

use crate::coset::{coef, Coef};
use crate::error::{Error, Result};
use crate::field::ResidueField;
use crate::report::Report;

/// Enumeration budget for the brute-force models.
pub const ORDERS_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalOrderParams {
    pub q: u32,
    /// `+1` split, `-1` inert.
    pub eps: i32,
    pub c: u32,
}

impl LocalOrderParams {
    pub fn new(q: u32, eps: i32, c: u32) -> Result<Self> {
        ResidueField::new(q)?;
        if eps != 1 && eps != -1 {
            return Err(Error::Domain(format!("eps must be +1 or -1, got {eps}")));
        }
        Ok(LocalOrderParams { q, eps, c })
    }
}

/// `#(O_0^x / O_c^x) = q^{c-1}(q - eps)`, and `1` for `c = 0`.
pub fn unit_index(p: LocalOrderParams) -> u128 {
    if p.c == 0 {
        return 1;
    }
    (p.q as u128).pow(p.c - 1) * (p.q as i128 - p.eps as i128) as u128
}

/// `#(O_c^x / O_{c+k}^x) = q^k` for `c >= k > 0`.
pub fn step_index(q: u32, c: u32, k: u32) -> Result<u128> {
    if k == 0 || c < k {
        return Err(Error::Domain(format!("step index needs c >= k > 0, got c={c}, k={k}")));
    }
    Ok((q as u128).pow(k))
}

/// `(q - eps) / u(r)` with `u(0) = u0` and `u(r) = 1` for `r >= 1`.
pub fn galois_degree(q: u32, eps: i32, r: u32, u0: u32) -> Result<Coef> {
    if u0 == 0 {
        return Err(Error::Domain("u0 must be at least 1".into()));
    }
    let u = if r == 0 { u0 } else { 1 };
    Ok(coef(q as i128 - eps as i128) / coef(u as i128))
}

/// The residue algebra `O_E / w O_E = F_q[t]/(t^2 - r1 t - r0)`.
#[derive(Debug, Clone, Copy)]
struct QuadAlgebra {
    f: ResidueField,
    r0: u32,
    r1: u32,
}

impl QuadAlgebra {
    fn new(q: u32, eps: i32) -> Result<Self> {
        let f = ResidueField::new(q)?;
        if eps == 1 {
            // t^2 = t: idempotent, so the algebra is F_q x F_q
            return Ok(QuadAlgebra { f, r0: 0, r1: 1 });
        }
        for r1 in 0..q {
            for r0 in 1..q {
                let has_root = (0..q).any(|x| f.sub(f.mul(x, x), f.add(f.mul(r1, x), r0)) == 0);
                if !has_root {
                    return Ok(QuadAlgebra { f, r0, r1 });
                }
            }
        }
        Err(Error::Internal(format!("no irreducible quadratic over F_{q}")))
    }

    fn mul(&self, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
        let f = &self.f;
        let bb = f.mul(x.1, y.1);
        let a = f.add(f.mul(x.0, y.0), f.mul(bb, self.r0));
        let b = f.add(f.add(f.mul(x.0, y.1), f.mul(x.1, y.0)), f.mul(bb, self.r1));
        (a, b)
    }

    fn add(&self, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
        (self.f.add(x.0, y.0), self.f.add(x.1, y.1))
    }

    fn is_unit(&self, x: (u32, u32)) -> bool {
        let f = &self.f;
        let norm = f.sub(f.add(f.mul(x.0, x.0), f.mul(self.r1, f.mul(x.0, x.1))), f.mul(self.r0, f.mul(x.1, x.1)));
        norm != 0
    }
}

type Elem = Vec<(u32, u32)>;

/// `O_E / w^len O_E` with truncated multiplication.
struct Truncated {
    a: QuadAlgebra,
    len: usize,
}

impl Truncated {
    fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = vec![(0, 0); self.len];
        for i in 0..self.len {
            for j in 0..self.len - i {
                out[i + j] = self.a.add(out[i + j], self.a.mul(x[i], y[j]));
            }
        }
        out
    }

    /// Units whose first `rational` digits lie in `F_q`.
    fn units(&self, rational: usize) -> Vec<Elem> {
        let q = self.a.f.q();
        let mut out = Vec::new();
        let radices: Vec<u32> = (0..self.len).map(|i| if i < rational { q } else { q * q }).collect();
        let mut cur = vec![0u32; self.len];
        loop {
            let e: Elem = cur.iter().map(|&d| (d % q, d / q)).collect();
            if self.a.is_unit(e[0]) {
                out.push(e);
            }
            let mut i = 0;
            while i < self.len && cur[i] + 1 == radices[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == self.len {
                return out;
            }
            cur[i] += 1;
        }
    }
}

/// Number of cosets of `sub` in the finite abelian group `group`, counted orbit by orbit.
fn coset_count(t: &Truncated, group: &[Elem], sub: &[Elem]) -> u128 {
    let mut seen: HashSet<&Elem> = HashSet::with_capacity(group.len());
    let lookup: HashSet<&Elem> = group.iter().collect();
    let mut count = 0;
    for g in group {
        if seen.contains(g) {
            continue;
        }
        count += 1;
        for h in sub {
            let gh = t.mul(g, h);
            if let Some(x) = lookup.get(&gh) {
                seen.insert(x);
            }
        }
    }
    count
}

fn model_size(q: u32, rational: u32, len: u32) -> u64 {
    (q as u64).saturating_pow(rational + 2 * (len - rational))
}

/// `#(O_0^x / O_c^x)` by enumerating `(O_E / w^c)^x` modulo `(O_F / w^c)^x`.
pub fn bruteforce_unit_index(q: u32, eps: i32, c: u32) -> Result<u128> {
    if c == 0 {
        return Ok(1);
    }
    if model_size(q, 0, c) > ORDERS_CAP {
        return Err(Error::Resource(format!("q^(2c) = {} exceeds the cap", model_size(q, 0, c))));
    }
    let t = Truncated { a: QuadAlgebra::new(q, eps)?, len: c as usize };
    Ok(coset_count(&t, &t.units(0), &t.units(c as usize)))
}

/// `#(O_c^x / O_{c+k}^x)` by enumeration modulo `w^{c+k}`.
pub fn bruteforce_step_index(q: u32, eps: i32, c: u32, k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let len = c + k;
    if model_size(q, c, len) > ORDERS_CAP {
        return Err(Error::Resource(format!("{} elements exceed the cap", model_size(q, c, len))));
    }
    let t = Truncated { a: QuadAlgebra::new(q, eps)?, len: len as usize };
    Ok(coset_count(&t, &t.units(c as usize), &t.units(len as usize)))
}

/// Formula versus enumeration for `c <= cmax`, plus the step indices and Galois degrees.
pub fn verify_orders(q: u32, eps: i32, cmax: u32) -> Report {
    let start = Instant::now();
    let mut r = Report::new("orders").param("q", q).param("eps", eps).param("cmax", cmax);
    let run = |r: &mut Report| -> Result<()> {
        let mut rows = Vec::new();
        for c in 0..=cmax {
            let p = LocalOrderParams::new(q, eps, c)?;
            let (f, b) = (unit_index(p), bruteforce_unit_index(q, eps, c)?);
            rows.push(json!([c, f.to_string(), b.to_string()]));
            if f != b {
                r.fail(json!({"c": c, "formula": f.to_string(), "bruteforce": b.to_string()}));
                return Ok(());
            }
            if c >= 1 && unit_index(LocalOrderParams::new(q, eps, c + 1)?) != f * q as u128 {
                r.fail(json!({"c": c, "reason": "filtration step is not q"}));
                return Ok(());
            }
        }
        r.count("unit_index", json!(rows));
        let mut steps = Vec::new();
        for c in 1..=cmax {
            for k in 1..=c {
                let (f, b) = (step_index(q, c, k)?, bruteforce_step_index(q, eps, c, k)?);
                steps.push(json!([c, k, f.to_string(), b.to_string()]));
                if f != b {
                    r.fail(json!({"c": c, "k": k, "formula": f.to_string(), "bruteforce": b.to_string()}));
                    return Ok(());
                }
            }
        }
        r.count("step_index", json!(steps));
        let mut degrees = Vec::new();
        for (rr, u0) in [(0u32, 1u32), (0, 2), (1, 1), (2, 1)] {
            let d = galois_degree(q, eps, rr, u0)?;
            let expect = coef(q as i128 - eps as i128) / coef(if rr == 0 { u0 as i128 } else { 1 });
            degrees.push(json!([rr, u0, format!("{d}"), d.is_integer()]));
            if d != expect || (rr >= 1 && d.denom() != &i128::one()) {
                r.fail(json!({"r": rr, "u0": u0, "degree": format!("{d}")}));
                return Ok(());
            }
        }
        r.count("galois_degree", json!(degrees));
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(unit_index(LocalOrderParams::new(3, 1, 1).unwrap()), 2);
        assert_eq!(unit_index(LocalOrderParams::new(3, 1, 2).unwrap()), 6);
        assert_eq!(unit_index(LocalOrderParams::new(3, -1, 1).unwrap()), 4);
        assert_eq!(unit_index(LocalOrderParams::new(3, -1, 0).unwrap()), 1);
        assert_eq!(step_index(3, 1, 1).unwrap(), 3);
        assert_eq!(step_index(2, 2, 2).unwrap(), 4);
        assert!(step_index(2, 1, 2).is_err());
        assert_eq!(galois_degree(5, 1, 1, 7).unwrap(), coef(4));
        assert_eq!(galois_degree(5, 1, 0, 2).unwrap(), coef(2));
        assert_eq!(galois_degree(3, -1, 0, 1).unwrap(), coef(4));
        assert!(!galois_degree(5, 1, 0, 3).unwrap().is_integer());
    }

    #[test]
    fn bruteforce_small() {
        assert_eq!(bruteforce_unit_index(3, 1, 1).unwrap(), 2);
        assert_eq!(bruteforce_unit_index(3, -1, 1).unwrap(), 4);
        assert_eq!(bruteforce_unit_index(2, -1, 2).unwrap(), 6);
        assert_eq!(bruteforce_step_index(2, 1, 2, 2).unwrap(), 4);
    }
}
