//! Runs the twelve acceptance criteria at their stated scale and runtime budgets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use quatfact_cli::config::RunConfig;
use quatfact_cli::verify::run_check;

/// Runtime budget per criterion, in seconds.
const BUDGETS: [u64; 12] = [10, 60, 300, 120, 300, 300, 120, 120, 60, 120, 180, 120];

fn main() -> ExitCode {
    let config = RunConfig::default();
    let mut failures = 0;
    let start = Instant::now();
    for id in 1..=12u32 {
        let t = Instant::now();
        let result = run_check(id, &config);
        let elapsed = t.elapsed();
        let in_budget = elapsed <= Duration::from_secs(BUDGETS[id as usize - 1]);
        let pass = result.pass && in_budget;
        failures += usize::from(!pass);
        println!(
            "criterion {id:>2}: {} ({} instances, {:.1}s of {}s) {}",
            if pass { "PASS" } else { "FAIL" },
            result.instances,
            elapsed.as_secs_f64(),
            BUDGETS[id as usize - 1],
            result.claim,
        );
        if let Some(c) = &result.counterexample {
            println!("    counterexample: {c}");
        }
    }
    let total = start.elapsed();
    let in_budget = total <= Duration::from_secs(15 * 60);
    println!("suite: {:.1}s of 900s", total.as_secs_f64());
    if failures == 0 && in_budget {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
