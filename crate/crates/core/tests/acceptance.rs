use std::time::{Duration, Instant};

use rwkit::suite::{criterion_report, SuiteInput, TITLES};

const SEED: u64 = 20;

/// Wall-clock budget per criterion, where one is set.
fn budget(id: u8) -> Option<Duration> {
    let secs = match id {
        1 => 10,
        2 => 60,
        5 => 5,
        6 => 30,
        10 => 20,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn main() {
    let input = SuiteInput::seeded(SEED);
    let mut failed = Vec::new();
    for id in 1..=10u8 {
        let start = Instant::now();
        let outcome = criterion_report(id, &input);
        let elapsed = start.elapsed();
        let title = TITLES[id as usize - 1];
        let over = budget(id).filter(|b| elapsed > *b);
        match outcome {
            Ok(rep) => {
                let ok = rep.passed && over.is_none();
                let worst = rep.checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max);
                println!(
                    "{} criterion {id:>2}: {title} ({} checks, worst residual {worst:.2e}, {:.2} s)",
                    if ok { "PASS" } else { "FAIL" },
                    rep.checks.len(),
                    elapsed.as_secs_f64()
                );
                for c in rep.checks.iter().filter(|c| !c.passed) {
                    println!("    failed: {} {:?} {}", c.name, c.residual, c.detail);
                }
                if let Some(b) = over {
                    println!("    over budget of {} s", b.as_secs());
                }
                if !ok {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("FAIL criterion {id:>2}: {title} (error: {e})");
                failed.push(id);
            }
        }
    }
    if !failed.is_empty() {
        println!("criteria failed: {failed:?}");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
