//! Runs every acceptance criterion at full size and prints one line each.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;

use minimal7::checks::{run_all, CheckConfig};

fn main() -> ExitCode {
    let reports = run_all(&CheckConfig::default());
    println!();
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("acceptance: {}/{} criteria pass", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
