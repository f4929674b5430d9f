//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Tolerances and time budgets are pinned in `octabill::verify`.

use std::process::ExitCode;

use octabill::verify;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=17 {
        let c = verify::run(id);
        println!("{} {:>2} {:<15} {:>7.2}s  {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.seconds, c.detail);
        failed += usize::from(!c.pass);
    }
    println!("{} of 17 criteria pass", 17 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
