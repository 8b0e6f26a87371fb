//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use split_hecke::congruence::{check_congruence_theorem, check_divisibility_lemma, check_root_identity, construct_horizontal_lift, Variant};
use split_hecke::hecke_poly::build_hecke_polynomial;
use split_hecke::orbit::Level;
use split_hecke::orders::verify_orders;
use split_hecke::report::{Report, Status};
use split_hecke::satake::verify_dictionary;
use split_hecke::suite::{check_coset_counts, check_normal_form_trials, check_u_reps, run_suite, Profile, TRIAL_SEED};
use split_hecke::u_operator::DEFAULT_CAP;

const N1: &str = "z^2 : 1\nz^1 : -T1V*T1W\nz^0 : s^2*T2V*T1W^2\n";

const N2: &str = "z^6 : 1
z^5 : -T1V*T1W
z^4 : s^2*T2V*T1W^2 - 2*s^4*T2V*T2W + s^2*T1V^2*T2W
z^3 : -s^6*T3V*T1W^3 + 3*s^8*T3V*T1W*T2W - s^4*T1V*T2V*T1W*T2W
z^2 : s^8*T1V*T3V*T1W^2*T2W - 2*s^10*T1V*T3V*T2W^2 + s^8*T2V^2*T2W^2
z^1 : -s^12*T2V*T3V*T1W*T2W^2
z^0 : s^18*T3V^2*T2W^3
";

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn passed(r: &Report) -> bool {
    matches!(r.status, Status::Pass | Status::PassVacuous)
}

fn first_bad(reports: &[Report]) -> Option<&Report> {
    reports.iter().find(|r| !passed(r))
}

fn grid_outcome(reports: &[Report], what: &str) -> Outcome {
    match first_bad(reports) {
        None => {
            let vacuous = reports.iter().filter(|r| r.status == Status::PassVacuous).count();
            ok(true, format!("{} {what}, {vacuous} vacuous", reports.len()))
        }
        Some(r) => ok(false, format!("{} -> {}", r.summary_line(), r.to_json())),
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let got = build_hecke_polynomial(1).map(|h| h.to_fixture());
    let elapsed = start.elapsed();
    match got {
        Ok(text) => ok(text == N1 && elapsed < Duration::from_secs(1), format!("exact match {}, {elapsed:.2?}", text == N1)),
        Err(e) => ok(false, e.to_string()),
    }
}

fn c2() -> Outcome {
    let start = Instant::now();
    let h = match build_hecke_polynomial(2) {
        Ok(h) => h,
        Err(e) => return ok(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let text = h.to_fixture();
    let lines: Vec<&str> = text.lines().collect();
    let want: Vec<&str> = N2.lines().collect();
    let displayed = [0, 1, 2, 6].iter().all(|&i| lines.get(i) == want.get(i));
    let pass = displayed && text == N2 && h.is_monic() && h.has_even_s_powers() && elapsed < Duration::from_secs(5);
    ok(pass, format!("z^6,z^5,z^4,z^0 match {displayed}, all seven lines pinned {}, monic {}, even {}, {elapsed:.2?}", text == N2, h.is_monic(), h.has_even_s_powers()))
}

fn c3() -> Outcome {
    let mut reports = Vec::new();
    for q in [2, 3, 5] {
        let start = Instant::now();
        let r = check_root_identity(1, q, DEFAULT_CAP);
        if start.elapsed() > Duration::from_secs(10) {
            return ok(false, format!("n=1 q={q} took {:.2?}", start.elapsed()));
        }
        reports.push(r);
    }
    let n2 = check_root_identity(2, 2, DEFAULT_CAP);
    let pass = reports.iter().all(|r| r.status == Status::Pass) && matches!(n2.status, Status::Pass | Status::Skip);
    ok(pass, format!("n=1 q=2,3,5 exact zero; optional n=2 q=2: {} ({} ms)", n2.status, n2.millis))
}

fn divisibility_grid() -> Vec<(usize, u32, u32)> {
    let mut grid = Vec::new();
    for q in [3, 5] {
        for k in 1..=4 {
            grid.push((1, q, k));
        }
    }
    for q in [2, 3] {
        for k in 1..=2 {
            grid.push((2, q, k));
        }
    }
    grid
}

fn c4() -> Outcome {
    let mut reports = Vec::new();
    let mut worst = Duration::ZERO;
    for (n, q, k) in divisibility_grid() {
        let start = Instant::now();
        reports.push(check_divisibility_lemma(n, q, k, DEFAULT_CAP));
        worst = worst.max(start.elapsed());
    }
    let vacuous_ok = reports.iter().all(|r| (r.params["q"] == 2) == (r.status == Status::PassVacuous) || !passed(r));
    let mut out = grid_outcome(&reports, "cells");
    out.pass = out.pass && vacuous_ok && worst < Duration::from_secs(30);
    out.detail = format!("{}, q=2 labelled vacuous {vacuous_ok}, worst cell {worst:.2?}", out.detail);
    out
}

fn congruence_table() -> Vec<Report> {
    let mut out = Vec::new();
    for (n, q) in [(1, 3), (1, 5), (2, 2), (2, 3)] {
        for variant in [Variant::Plain, Variant::Tilde] {
            for level in [Level::HDer, Level::H0] {
                out.push(check_congruence_theorem(n, q, variant, level));
            }
        }
    }
    out
}

fn c5() -> Outcome {
    let gate: Vec<Report> = [(1, 3), (1, 5), (2, 3)]
        .iter()
        .map(|&(n, q)| check_congruence_theorem(n, q, Variant::Tilde, Level::H0))
        .collect();
    let first = congruence_table();
    let second = congruence_table();
    let deterministic = first.iter().map(Report::without_timing).eq(second.iter().map(Report::without_timing));
    let cells: Vec<String> = first
        .iter()
        .map(|r| {
            format!(
                "{}/{}/{}/{}={}",
                r.params["n"],
                r.params["q"],
                r.params["variant"].as_str().unwrap_or(""),
                r.params["level"].as_str().unwrap_or(""),
                r.status
            )
        })
        .collect();
    let gate_ok = gate.iter().all(|r| r.status == Status::Pass);
    ok(gate_ok && deterministic, format!("tilde/h0 gate {gate_ok}, table deterministic {deterministic}; table: {}", cells.join(" ")))
}

fn c6() -> Outcome {
    let reports: Vec<Report> = [3, 5].iter().map(|&q| construct_horizontal_lift(1, q).1).collect();
    grid_outcome(&reports, "lifts with exact trace identity")
}

fn c7() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=2 {
        for q in [2, 3] {
            reports.push(verify_dictionary(n, q));
        }
    }
    grid_outcome(&reports, "dictionaries")
}

fn c8() -> Outcome {
    let mut reports = Vec::new();
    for m in 1..=4 {
        for q in [2, 3, 5] {
            reports.push(check_coset_counts(m, q));
        }
    }
    for (n, q, k) in divisibility_grid() {
        reports.push(check_u_reps(n, q, k, DEFAULT_CAP));
    }
    grid_outcome(&reports, "coset and U-representative counts")
}

fn c9() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=2 {
        for q in [2, 3] {
            reports.push(check_normal_form_trials(n, q, 500, TRIAL_SEED));
        }
    }
    let trials = grid_outcome(&reports, "x 500 trials");
    let (mut checked, mut congruence) = (0, 0);
    for (n, q) in [(1, 2), (1, 3), (2, 2)] {
        let (c, g) = common::stabilizer_sweep(n, q, 1 << 20);
        checked += c;
        congruence += g;
    }
    ok(trials.pass, format!("{}; stabilizer oracle agreed on {checked} forms ({congruence} with congruence determinant)", trials.detail))
}

fn c10() -> Outcome {
    let mut reports = Vec::new();
    for q in [2, 3, 5] {
        for eps in [1, -1] {
            reports.push(verify_orders(q, eps, 3));
        }
    }
    grid_outcome(&reports, "order grids")
}

fn c11() -> Outcome {
    let start = Instant::now();
    let (a, b) = match (run_suite(Profile::Quick, 1, DEFAULT_CAP), run_suite(Profile::Quick, 8, DEFAULT_CAP)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return ok(false, e.to_string()),
    };
    let elapsed = start.elapsed() / 2;
    let ja: Vec<String> = a.iter().map(|r| r.without_timing().to_json()).collect();
    let jb: Vec<String> = b.iter().map(|r| r.without_timing().to_json()).collect();
    let same = ja == jb;
    ok(same && elapsed < Duration::from_secs(300), format!("{} reports identical across jobs {same}, quick suite {elapsed:.2?}", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Hecke polynomial n=1", c1),
        ("Hecke polynomial n=2", c2),
        ("annihilation of U", c3),
        ("divisibility lemma", c4),
        ("congruence theorem", c5),
        ("horizontal lift", c6),
        ("Satake dictionary", c7),
        ("coset counts", c8),
        ("orbit geometry properties", c9),
        ("local orders", c10),
        ("determinism", c11),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failures += !o.pass as usize;
        println!("criterion {:>2} {}: {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
