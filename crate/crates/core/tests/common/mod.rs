#![allow(dead_code)]

use std::collections::BTreeSet;

use split_hecke::field::{FieldElem, LaurentPoly};
use split_hecke::matrix::{coset_key, embed_iota, is_in_k, Mat};
use split_hecke::orbit::{stabilizer_det, NormalForm, StabDet};

/// Every reduced normal form with `c = 0`, `alpha_i in [0, amax]`, `m_i in [mmin, alpha_i]`.
pub fn reduced_forms(n: usize, amax: i64, mmin: i64) -> Vec<NormalForm> {
    let mut out = Vec::new();
    let span_a = (amax + 1) as usize;
    let span_m = (amax - mmin + 1) as usize;
    for ca in 0..span_a.pow(n as u32) {
        let alpha: Vec<i64> = (0..n).map(|i| ((ca / span_a.pow(i as u32)) % span_a) as i64).collect();
        for cm in 0..span_m.pow(n as u32) {
            let m: Vec<i64> = (0..n).map(|i| mmin + ((cm / span_m.pow(i as u32)) % span_m) as i64).collect();
            let nf = NormalForm::from_lattice_data(0, &alpha, &m);
            if nf.is_reduced() {
                out.push(nf);
            }
        }
    }
    out
}

/// Precision `N` with `K(w^N)` inside the stabilizer of the reduced lattice.
pub fn stabilizer_precision(nf: &NormalForm) -> i64 {
    let alpha = nf.alpha();
    let m = nf.m();
    let n = nf.n();
    let mut need = 1;
    for i in 0..n {
        for j in 0..n {
            need = need.max(alpha[i] - alpha[j]).max(alpha[i] - m[j]);
        }
    }
    need
}

/// Lower bounds `val k_ij >= max(0, alpha_i - alpha_j)` forced by `k D_alpha O = D_alpha O`.
pub fn entry_floors(nf: &NormalForm) -> Vec<Vec<i64>> {
    let alpha = nf.alpha();
    let n = nf.n();
    (0..n).map(|i| (0..n).map(|j| (alpha[i] - alpha[j]).max(0)).collect()).collect()
}

/// Number of candidate matrices `stabilizer_dets_bruteforce` would visit.
pub fn stabilizer_search_size(nf: &NormalForm, q: u32, prec: i64) -> u64 {
    let free: i64 = entry_floors(nf).iter().flatten().map(|&f| (prec - f).max(0)).sum();
    (q as u64).saturating_pow(free as u32)
}

/// Determinants mod `w^prec` of all `k in GL_n(O/w^prec)` whose lift fixes the reduced lattice.
pub fn stabilizer_dets_bruteforce(nf: &NormalForm, q: u32, prec: i64) -> BTreeSet<Vec<u32>> {
    let n = nf.n();
    let x0 = nf.lattice_basis(q);
    let target = coset_key(&x0).unwrap();
    let floors = entry_floors(nf);
    let total = stabilizer_search_size(nf, q, prec);
    let mut out = BTreeSet::new();
    for code in 0..total {
        let mut c = code;
        let mut k = Mat::zero(q, n);
        for i in 0..n {
            for j in 0..n {
                let lo = floors[i][j].min(prec);
                let mut digits = Vec::new();
                for _ in lo..prec {
                    digits.push((c % q as u64) as u32);
                    c /= q as u64;
                }
                k.set(i, j, LaurentPoly::new(q, lo, digits).to_field());
            }
        }
        if !is_in_k(&k) {
            continue;
        }
        if coset_key(&embed_iota(&k).mul(&x0)).unwrap() == target {
            out.insert(digits_of(&k.det(), prec));
        }
    }
    out
}

pub fn digits_of(u: &FieldElem, prec: i64) -> Vec<u32> {
    let t = u.series_truncate(prec);
    (0..prec).map(|e| t.coeff(e)).collect()
}

/// Unit residues mod `w^prec` predicted by a determinant descriptor.
pub fn predicted_dets(d: StabDet, q: u32, prec: i64) -> BTreeSet<Vec<u32>> {
    let per = (q as u64).pow(prec as u32);
    let mut out = BTreeSet::new();
    for code in 0..per {
        let mut c = code;
        let digits: Vec<u32> = (0..prec)
            .map(|_| {
                let d = (c % q as u64) as u32;
                c /= q as u64;
                d
            })
            .collect();
        if digits[0] == 0 {
            continue;
        }
        let ok = match d {
            StabDet::AllUnits => true,
            StabDet::Congruence(m) => {
                digits[0] == 1 && digits[1..(m as usize).min(prec as usize)].iter().all(|&x| x == 0)
            }
        };
        if ok {
            out.insert(digits);
        }
    }
    out
}

/// Returns (forms checked, forms with a proper congruence determinant).
pub fn stabilizer_sweep(n: usize, q: u32, budget: u64) -> (usize, usize) {
    let mut checked = 0;
    let mut congruence = 0;
    for nf in reduced_forms(n, 4, -2) {
        if nf.a.iter().chain(nf.b.iter()).any(|v| v.abs() > 2) {
            continue;
        }
        let prec = stabilizer_precision(&nf).max(3);
        assert!(stabilizer_search_size(&nf, q, prec) <= budget, "{nf} needs precision {prec}");
        let predicted = stabilizer_det(&nf.a, &nf.b);
        let got = stabilizer_dets_bruteforce(&nf, q, prec);
        assert_eq!(got, predicted_dets(predicted, q, prec), "n={n} q={q} {nf}");
        checked += 1;
        congruence += matches!(predicted, StabDet::Congruence(_)) as usize;
    }
    (checked, congruence)
}
