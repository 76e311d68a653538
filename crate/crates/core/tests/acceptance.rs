//! Acceptance run: every criterion with its time budget, one line each.

use std::process::ExitCode;
use std::time::Duration;

use balance_kit::verify::{catalogue, run_check, Options};

fn budget(id: u32) -> Duration {
    Duration::from_secs(match id {
        1 | 2 | 3 | 9 | 10 => 30,
        4 | 8 | 11 => 60,
        5 => 300,
        _ => 1,
    })
}

fn main() -> ExitCode {
    let options = Options::default();
    let mut failed = 0;
    for (id, _, _) in catalogue() {
        let check = run_check(id, &options).expect("catalogued id");
        let limit = budget(id);
        let in_time = check.elapsed <= limit;
        let ok = check.passed && in_time;
        failed += usize::from(!ok);
        println!(
            "criterion {id:>2}: {} {} [{:.2?} of {:?}]",
            if ok { "PASS" } else { "FAIL" },
            check.description,
            check.elapsed,
            limit
        );
        if !check.passed {
            println!("    expected: {}\n    actual:   {}", check.expected, check.actual);
        } else if !in_time {
            println!("    over the time budget");
        }
    }
    println!("acceptance: {} of {} criteria passed", 12 - failed, 12);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
