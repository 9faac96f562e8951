use std::process::ExitCode;

use hecke_core::verify::{criterion, NAMES};
use hecke_core::WorkbenchConfig;

fn main() -> ExitCode {
    let config = WorkbenchConfig::default();
    let mut failed = Vec::new();
    for k in 1..=NAMES.len() as u8 {
        let c = criterion(k, &config);
        println!("{c}");
        for f in c.failures.iter().take(5) {
            println!("    {f}");
        }
        if !c.passed {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", NAMES.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
