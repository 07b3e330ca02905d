//! Desk-scale acceptance suite. Runs `accept` once (which executes the
//! suite twice for the determinism check) and prints one line per
//! criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;

use glvar_cli::accept::{accept, Verdict};
use glvar_cli::RunConfig;

const CRITERIA: [(&str, &str); 11] = [
    ("1", "correlation + interval variance / 2 = saturation rigidity"),
    ("2", "small-omega slope of the staircase correlation"),
    ("3", "rigidity scaling and theory agreement"),
    ("4", "persistent oscillation of the global variance"),
    ("5", "interference sum beats the diagonal sum"),
    ("6", "stationary phase of transposed pairs"),
    ("7", "estimator identities on shared data"),
    ("8", "oracle equivalence"),
    ("9", "parametric averaging quality"),
    ("10", "determinism"),
    ("truncation-self-test", "halved truncation is flagged"),
];

fn main() -> ExitCode {
    let suite = match accept(&RunConfig::desk(), None) {
        Ok(s) => s,
        Err(e) => {
            println!("acceptance suite did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut failed = 0;
    for (id, what) in CRITERIA {
        match suite.report.line(id) {
            Some(line) => {
                let verdict = if line.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
                if line.verdict != Verdict::Pass {
                    failed += 1;
                }
                println!("criterion {id} ({what}): {verdict} measured {} bound {}", line.measured, line.bound);
            }
            None => {
                failed += 1;
                println!("criterion {id} ({what}): FAIL missing from report");
            }
        }
    }
    if let Some(line) = suite.report.line("averaged-offset") {
        println!("averaged offset (reported): {}", line.measured);
    }
    println!("acceptance: {} of {} passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
