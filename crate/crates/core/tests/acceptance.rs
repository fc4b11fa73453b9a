//! Prints one line per acceptance criterion and fails if any criterion does.

use std::process::ExitCode;

use slidewin::acceptance::run_all;
use slidewin::harness::Execution;

fn main() -> ExitCode {
    let results = run_all(Execution::default());
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
