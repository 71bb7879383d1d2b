//! Runs every seeded sweep on a small configuration.

use qlocal::checks::{run_suite, CheckConfig, Suite};

fn main() -> qlocal::Result<()> {
    let cfg = CheckConfig { n: 3, trials: 10, seed: 42, ..CheckConfig::default() };
    for suite in Suite::ALL {
        let report = run_suite(suite, &cfg)?;
        println!(
            "{:<13} {:>4} comparisons  max deviation {:.2e}  {}",
            suite.name(),
            report.comparisons.len(),
            report.max_deviation(),
            if report.passed() { "pass" } else { "FAIL" }
        );
    }
    Ok(())
}
