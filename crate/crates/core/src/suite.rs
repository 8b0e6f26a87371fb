//! The verification grid behind `suite`, plus the small checks that only it uses.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::congruence::{check_congruence_theorem, check_divisibility_lemma, check_root_identity, construct_horizontal_lift, Variant};
use crate::coset::{decompose_double_coset, decompose_double_coset_bfs, gaussian_binomial, MinusculeCochar};
use crate::error::{Error, Result};
use crate::hecke_poly::{build_hecke_polynomial, HeckePolynomial};
use crate::matrix::{coset_key, random_k, GroupElement, Mat};
use crate::orbit::{normal_form, refined_key, verify_witness, Level};
use crate::orders::verify_orders;
use crate::report::{Report, Status};
use crate::satake::verify_dictionary;
use crate::u_operator::{u_power_apply, UConfig};

/// Stored Hecke polynomials, format version 1.
pub fn fixture(n: usize) -> Option<&'static str> {
    match n {
        1 => Some(include_str!("../fixtures/v1/hecke_n1.txt")),
        2 => Some(include_str!("../fixtures/v1/hecke_n2.txt")),
        3 => Some(include_str!("../fixtures/v1/hecke_n3.txt")),
        4 => Some(include_str!("../fixtures/v1/hecke_n4.txt")),
        _ => None,
    }
}

/// Builds `H_w` and compares it with the stored fixture and the structural invariants.
pub fn check_hecke_polynomial(n: usize) -> Report {
    let start = Instant::now();
    let mut r = Report::new("hecke-poly").param("n", n);
    let run = |r: &mut Report| -> Result<()> {
        let p = build_hecke_polynomial(n)?;
        r.count("degree", p.degree());
        r.count("monic", p.is_monic());
        r.count("even_s_powers", p.has_even_s_powers());
        r.count("terms", p.coeffs.iter().map(|c| c.len()).sum::<usize>());
        if !p.is_monic() || !p.has_even_s_powers() || p.degree() != n * (n + 1) {
            r.fail(json!("structural invariant violated"));
            return Ok(());
        }
        let stored = fixture(n).ok_or_else(|| Error::Domain(format!("no fixture for n = {n}")))?;
        if HeckePolynomial::parse_fixture(n, stored)? != p {
            let got = p.to_fixture();
            let line = got.lines().zip(stored.lines()).find(|(a, b)| a != b).map(|(a, _)| a.to_string());
            r.fail(json!({"first_differing_line": line}));
        }
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

/// `|K lambda_k K / K|` for every `k`: explicit family, BFS oracle and Gaussian binomial.
pub fn check_coset_counts(m: usize, q: u32) -> Report {
    let start = Instant::now();
    let mut r = Report::new("cosets").param("m", m).param("q", q);
    let run = |r: &mut Report| -> Result<()> {
        let mut sizes = Vec::new();
        for k in 1..=m {
            let lambda = MinusculeCochar::new(m, k)?;
            let explicit: Vec<_> = decompose_double_coset(lambda, q).iter().map(coset_key).collect::<Result<_>>()?;
            let distinct: BTreeSet<_> = explicit.iter().cloned().collect();
            let bfs: BTreeSet<_> = decompose_double_coset_bfs(lambda, q)?.into_iter().collect();
            let gb = gaussian_binomial(m as u32, k as u32, q as u64);
            sizes.push(json!([k, gb.to_string(), bfs.len()]));
            if distinct.len() != explicit.len() || distinct != bfs || bfs.len() as u128 != gb {
                r.fail(json!({"k": k, "explicit": explicit.len(), "distinct": distinct.len(), "bfs": bfs.len(), "gaussian": gb.to_string()}));
                return Ok(());
            }
        }
        r.count("sizes", json!(sizes));
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

/// `U^k [1]` has exactly `q^{k(2n-1)}` distinct cosets.
pub fn check_u_reps(n: usize, q: u32, k: u32, cap: u64) -> Report {
    let start = Instant::now();
    let mut r = Report::new("u-reps").param("n", n).param("q", q).param("k", k);
    let run = |r: &mut Report| -> Result<()> {
        let cfg = UConfig::new(n, q, k)?;
        let x = u_power_apply(&cfg, cap)?;
        r.count("cosets", x.len());
        r.count("expected", cfg.rep_count());
        if x.len() as u64 != cfg.rep_count() {
            r.fail(json!({"cosets": x.len(), "expected": cfg.rep_count()}));
        }
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

fn random_gl<R: Rng>(rng: &mut R, q: u32, m: usize) -> Mat {
    let d: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..3)).collect();
    random_k(rng, q, m, 2).mul(&Mat::diag_pow(q, &d)).mul(&random_k(rng, q, m, 2))
}

/// Randomized invariance of the normal form under `H x G x K` and of the refined key under translation.
pub fn check_normal_form_trials(n: usize, q: u32, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut r = Report::new("normal-form").param("n", n).param("q", q).param("trials", trials).param("seed", seed);
    let run = |r: &mut Report| -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ q as u64);
        let mut conductors = BTreeSet::new();
        for t in 0..trials {
            let g = GroupElement::new(random_gl(&mut rng, q, n + 1), random_gl(&mut rng, q, n))?;
            let h = random_gl(&mut rng, q, n);
            let k = GroupElement::new(random_k(&mut rng, q, n + 1, 2), random_k(&mut rng, q, n, 2))?;
            let moved = GroupElement::delta(&h).mul(&g).mul(&k);
            let (nf, wit) = normal_form(&g)?;
            let (nf2, wit2) = normal_form(&moved)?;
            let key = refined_key(&g, Level::HDer)?;
            let det = h.det();
            let v = det.ord().ok_or_else(|| Error::Internal("singular h".into()))?;
            let expected = key.translate(v, &det.unit_part());
            let ok = nf == nf2
                && nf.is_reduced()
                && verify_witness(&g, &nf, &wit)?
                && verify_witness(&moved, &nf2, &wit2)?
                && refined_key(&moved, Level::HDer)? == expected;
            conductors.insert(key.conductor());
            if !ok {
                r.fail(json!({"trial": t, "g1": g.g1.to_string(), "g2": g.g2.to_string(), "h": h.to_string()}));
                return Ok(());
            }
        }
        r.count("conductors_seen", json!(conductors));
        Ok(())
    };
    if let Err(e) = run(&mut r) {
        r.absorb_error(&e);
    }
    r.timed(start)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Hecke(usize),
    Cosets(usize, u32),
    UReps(usize, u32, u32),
    Root(usize, u32),
    Divisibility(usize, u32, u32),
    /// The flag marks the cells whose outcome gates the suite.
    Congruence(usize, u32, Variant, Level, bool),
    Lift(usize, u32),
    Satake(usize, u32),
    Orders(u32, i32),
    NormalForm(usize, u32),
}

/// Seed of the normal-form trials.
pub const TRIAL_SEED: u64 = 20_240_601;

pub fn tasks(profile: Profile) -> Vec<Task> {
    let mut out: Vec<Task> = vec![Task::Hecke(1), Task::Hecke(2), Task::Hecke(3)];
    for m in 1..=4 {
        for q in [2, 3, 5] {
            out.push(Task::Cosets(m, q));
        }
    }
    let mut div = Vec::new();
    for q in [3, 5] {
        for k in 1..=4 {
            div.push((1, q, k));
        }
    }
    for q in [2, 3] {
        for k in 1..=2 {
            div.push((2, q, k));
        }
    }
    if profile == Profile::Full {
        div.extend([(2, 2, 3), (3, 2, 1), (3, 3, 1)]);
    }
    out.extend(div.iter().map(|&(n, q, k)| Task::UReps(n, q, k)));
    for q in [2, 3, 5] {
        out.push(Task::Root(1, q));
    }
    if profile == Profile::Full {
        out.push(Task::Root(2, 2));
    }
    out.extend(div.iter().map(|&(n, q, k)| Task::Divisibility(n, q, k)));
    let gated = [(1, 3), (1, 5), (2, 3)];
    for (n, q) in [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3)] {
        for variant in [Variant::Plain, Variant::Tilde] {
            for level in [Level::HDer, Level::H0] {
                let gate = variant == Variant::Tilde && level == Level::H0 && gated.contains(&(n, q));
                out.push(Task::Congruence(n, q, variant, level, gate));
            }
        }
    }
    let mut lifts = vec![(1, 3), (1, 5)];
    if profile == Profile::Full {
        lifts.extend([(1, 2), (2, 2), (2, 3), (2, 5)]);
    }
    out.extend(lifts.iter().map(|&(n, q)| Task::Lift(n, q)));
    for n in 1..=2 {
        for q in [2, 3] {
            out.push(Task::Satake(n, q));
        }
    }
    for q in [2, 3, 5] {
        for eps in [1, -1] {
            out.push(Task::Orders(q, eps));
        }
    }
    for n in 1..=2 {
        for q in [2, 3] {
            out.push(Task::NormalForm(n, q));
        }
    }
    if profile == Profile::Full {
        out.push(Task::Hecke(4));
    }
    out
}

pub fn run_task(task: Task, cap: u64) -> Report {
    match task {
        Task::Hecke(n) => check_hecke_polynomial(n),
        Task::Cosets(m, q) => check_coset_counts(m, q),
        Task::UReps(n, q, k) => check_u_reps(n, q, k, cap),
        Task::Root(n, q) => check_root_identity(n, q, cap),
        Task::Divisibility(n, q, k) => check_divisibility_lemma(n, q, k, cap),
        Task::Congruence(n, q, variant, level, gate) => {
            check_congruence_theorem(n, q, variant, level).param("role", if gate { "gate" } else { "table" })
        }
        Task::Lift(n, q) => construct_horizontal_lift(n, q).1,
        Task::Satake(n, q) => verify_dictionary(n, q),
        Task::Orders(q, eps) => verify_orders(q, eps, 3),
        Task::NormalForm(n, q) => check_normal_form_trials(n, q, 500, TRIAL_SEED),
    }
}

/// Runs every task of the profile on a pool of `jobs` workers; output order is the task order.
pub fn run_suite(profile: Profile, jobs: usize, cap: u64) -> Result<Vec<Report>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let list = tasks(profile);
    Ok(pool.install(|| list.par_iter().map(|&t| run_task(t, cap)).collect()))
}

/// A report counts against the suite unless it is a tabulated (non-gating) cell.
pub fn is_gating(r: &Report) -> bool {
    r.params.get("role").and_then(|v| v.as_str()) != Some("table")
}

pub fn suite_failed(reports: &[Report]) -> bool {
    reports.iter().any(|r| is_gating(r) && r.status == Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match() {
        for n in 1..=2 {
            assert_eq!(check_hecke_polynomial(n).status, Status::Pass);
        }
    }

    #[test]
    fn coset_count_small() {
        assert_eq!(check_coset_counts(3, 2).status, Status::Pass);
    }

    #[test]
    fn trials_small() {
        let r = check_normal_form_trials(1, 3, 20, 1);
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }
}
