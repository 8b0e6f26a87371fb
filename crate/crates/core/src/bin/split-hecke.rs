use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use split_hecke::congruence::{self, Variant};
use split_hecke::hecke_poly::{build_hecke_polynomial, HeckePolynomial};
use split_hecke::matrix::{GroupElement, Mat};
use split_hecke::orbit::{class_invariant, conductor_of, normal_form, refined_key_from, Level};
use split_hecke::report::{Report, Status};
use split_hecke::suite::{run_suite, suite_failed, Profile};
use split_hecke::u_operator::DEFAULT_CAP;
use split_hecke::{orders, satake, Error, FieldElem};

#[derive(Parser)]
#[command(name = "split-hecke", version, about = "Exact split local Hecke computations and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hecke polynomial, or compare it with a fixture file.
    HeckePoly {
        #[arg(long)]
        n: usize,
        /// Specialize at s^2 = q.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Run one verifier and print its JSON report.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Reduce the pair given in a matrix file to its normal form.
    NormalForm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run the verification grid.
    Suite {
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Write the JSON lines here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Check {
    Root {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    Divisibility {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    Congruence {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        level: LevelArg,
    },
    Lift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    Satake {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
    },
    Orders {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        eps: i32,
        #[arg(long)]
        cmax: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Plain,
    Tilde,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Hder,
    H0,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn exit_for(status: Status) -> ExitCode {
    match status {
        Status::Pass | Status::PassVacuous => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Skip => ExitCode::from(2),
    }
}

fn emit(r: &Report) -> ExitCode {
    println!("{}", r.to_json());
    eprintln!("{}", r.summary_line());
    exit_for(r.status)
}

/// Rows separated by newlines; entries by commas when present, else whitespace.
fn parse_matrix_file(text: &str, n: usize, q: u32) -> Result<GroupElement, Error> {
    let rows: Vec<Vec<FieldElem>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            let parts: Vec<&str> = if line.contains(',') {
                line.split(',').map(str::trim).collect()
            } else {
                line.split_whitespace().collect()
            };
            parts
                .iter()
                .map(|p| {
                    FieldElem::parse(q, p).map_err(|e| match e {
                        Error::Parse(m) => Error::Parse(format!("row {}: {m}", i + 1)),
                        other => other,
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != 2 * n + 1 {
        return Err(Error::Parse(format!("expected {} rows ({} for g1, {} for g2), found {}", 2 * n + 1, n + 1, n, rows.len())));
    }
    let (top, bottom) = rows.split_at(n + 1);
    for (i, row) in rows.iter().enumerate() {
        let want = if i <= n { n + 1 } else { n };
        if row.len() != want {
            return Err(Error::Parse(format!("row {} has {} entries, expected {want}", i + 1, row.len())));
        }
    }
    GroupElement::new(Mat::from_rows(q, top.to_vec())?, Mat::from_rows(q, bottom.to_vec())?)
}

fn hecke_poly(n: usize, q: Option<u32>, fixture: Option<PathBuf>) -> Result<ExitCode, Error> {
    let p = build_hecke_polynomial(n)?;
    if let Some(path) = fixture {
        let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let stored = HeckePolynomial::parse_fixture(n, &text)?;
        if stored == p {
            println!("fixture {} matches", path.display());
            return Ok(ExitCode::SUCCESS);
        }
        println!("fixture {} differs", path.display());
        return Ok(ExitCode::from(1));
    }
    match q {
        Some(q) => print!("{}", p.specialize(q)?.to_text()),
        None => print!("{}", p.to_fixture()),
    }
    Ok(ExitCode::SUCCESS)
}

fn normal_form_cmd(n: usize, q: u32, path: PathBuf) -> Result<ExitCode, Error> {
    let text = fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let g = parse_matrix_file(&text, n, q)?;
    let (nf, wit) = normal_form(&g)?;
    let inv = class_invariant(&nf);
    println!("normal form: {nf}");
    println!("class invariant: c={} d={:?}", inv.c, inv.d);
    println!("conductor: {}", conductor_of(&nf));
    println!("shift: {}", wit.shift);
    println!("unit: {}", wit.unit);
    for level in [Level::H, Level::H0, Level::H1, Level::HDer] {
        println!("{} key: {}", level.name(), refined_key_from(nf.clone(), &wit, level));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::HeckePoly { n, q, fixture } => hecke_poly(n, q, fixture),
        Command::NormalForm { n, q, matrix } => normal_form_cmd(n, q, matrix),
        Command::Verify { check } => {
            let r = match check {
                Check::Root { n, q, cap } => congruence::check_root_identity(n, q, cap),
                Check::Divisibility { n, q, k, cap } => congruence::check_divisibility_lemma(n, q, k, cap),
                Check::Congruence { n, q, variant, level } => {
                    let variant = match variant {
                        VariantArg::Plain => Variant::Plain,
                        VariantArg::Tilde => Variant::Tilde,
                    };
                    let level = match level {
                        LevelArg::Hder => Level::HDer,
                        LevelArg::H0 => Level::H0,
                    };
                    congruence::check_congruence_theorem(n, q, variant, level)
                }
                Check::Lift { n, q } => congruence::construct_horizontal_lift(n, q).1,
                Check::Satake { n, q } => satake::verify_dictionary(n, q),
                Check::Orders { q, eps, cmax } => orders::verify_orders(q, eps, cmax),
            };
            Ok(emit(&r))
        }
        Command::Suite { profile, jobs, cap, out } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let reports = run_suite(profile, jobs, cap)?;
            let body: String = reports.iter().map(|r| r.to_json() + "\n").collect();
            match out {
                Some(path) => fs::write(&path, body).map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?,
                None => print!("{body}"),
            }
            for r in &reports {
                eprintln!("{}", r.summary_line());
            }
            if suite_failed(&reports) {
                return Ok(ExitCode::from(1));
            }
            if reports.iter().any(|r| r.status == Status::Skip) {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => usage_error(&e.to_string()),
    }
}
