//! The smoke-level self-check suite with one line per criterion.

use hyperthresh::suite::{run_suite, SuiteOptions};

fn main() {
    let report = run_suite(SuiteOptions { jobs: 4, ..SuiteOptions::default() });
    for line in report.summary_lines() {
        println!("{line}");
    }
    std::process::exit(if report.passed { 0 } else { 1 });
}
