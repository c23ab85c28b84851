//! Runs every named suite and prints one PASS/FAIL line per criterion.
//! Exits nonzero if any criterion fails or exceeds its time limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use quadgroup::suites::{run_suite, SuiteOptions};

/// Criterion number, suite, wall-clock limit in seconds.
const CRITERIA: [(u32, &str, u64); 10] = [
    (1, "wicks-oracle", 300),
    (2, "canonical-roundtrip", 300),
    (3, "thm33-torus", 120),
    (4, "thm33-genus2", 600),
    (5, "genus-growth", 900),
    (6, "orbit-6-1-2", 600),
    (7, "cor-6-8", 600),
    (8, "product-axioms", 60),
    (9, "klein-4-8", 300),
    (10, "structural-invariants", 300),
];

fn main() -> ExitCode {
    let opts = SuiteOptions::default();
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (n, suite, limit) in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| suite.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let report = run_suite(suite, &opts).expect("known suite");
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = report.passed && in_time;
        all &= ok;
        println!(
            "[{}] criterion {n:>2} {suite}: {} cases, {} failures, {:.1}s (limit {limit}s){}",
            if ok { "PASS" } else { "FAIL" },
            report.cases,
            report.failures,
            elapsed.as_secs_f64(),
            report
                .first_counterexample
                .as_ref()
                .map(|c| format!("; first counterexample: {c}"))
                .unwrap_or_default(),
        );
        for note in &report.notes {
            println!("       {note}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
