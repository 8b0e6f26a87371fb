//! Run the quick verification grid and print one line per check.

use split_hecke::suite::{run_suite, suite_failed, Profile};
use split_hecke::u_operator::DEFAULT_CAP;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reports = run_suite(Profile::Quick, 4, DEFAULT_CAP)?;
    for r in &reports {
        println!("{}", r.summary_line());
    }
    println!("suite failed: {}", suite_failed(&reports));
    Ok(())
}
