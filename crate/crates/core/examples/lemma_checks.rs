//! Analytic bounds next to their Monte Carlo estimates.

use jumpga::harness::validate::run_validation;

fn main() -> jumpga::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .map_or(100_000, |s| s.parse().expect("trial count"));
    let report = run_validation(trials, 1)?;
    for row in &report.rows {
        println!(
            "{:<5} {:<55} observed {:>12.6}  bound {:>12.6}",
            if row.pass { "ok" } else { "FAIL" },
            row.check,
            row.observed,
            row.bound
        );
    }
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
