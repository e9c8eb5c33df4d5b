//! Acceptance run: every criterion at its pinned tolerances and time budget.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::process::ExitCode;

use m2dq_core::suite::{run_suite, Suite, SuiteConfig};

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    let mut failures = 0;
    for suite in Suite::ALL {
        let line = match run_suite(suite, &config) {
            Ok(report) => {
                let runtime = report.runtime_s.unwrap_or(0.0);
                let ok = report.passed && report.within_runtime();
                if !ok {
                    failures += 1;
                }
                let mut line = format!(
                    "[{}] criterion {:>2} {:<32} max residual {:.3e}  runtime {:.2}s / {}s",
                    if ok { "PASS" } else { "FAIL" },
                    report.criterion,
                    suite.title(),
                    report.max_residual,
                    runtime,
                    report.runtime_limit_s,
                );
                for c in report.failed_checks() {
                    line.push_str(&format!(
                        "\n       failed: {} = {:.3e} (limit {:?} {:.3e})",
                        c.name, c.value, c.relation, c.limit
                    ));
                }
                line
            }
            Err(e) => {
                failures += 1;
                format!(
                    "[FAIL] criterion {:>2} {}: error: {e}",
                    suite.criterion(),
                    suite.title()
                )
            }
        };
        println!("{line}");
    }
    println!(
        "acceptance: {} of {} criteria passed",
        Suite::ALL.len() - failures,
        Suite::ALL.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
