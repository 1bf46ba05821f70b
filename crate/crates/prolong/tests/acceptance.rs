//! Acceptance criteria A1–A11: one line per criterion, with wall time
//! against a pinned limit. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use prolong::cache::BasisCache;
use prolong::checks::{criterion_name, Check, Context};
use prolong::report::{run_jobs, Job};
use prolong::suite::acceptance_plan;
use prolong_core::prolong::DEFAULT_DIMENSION_CAP;

const SEED: u64 = 0x5eed;

const LIMITS: [(u8, Duration); 11] = [
    (1, Duration::from_secs(1)),
    (2, Duration::from_secs(30)),
    (3, Duration::from_secs(300)),
    (4, Duration::from_secs(120)),
    (5, Duration::from_secs(30)),
    (6, Duration::from_secs(120)),
    (7, Duration::from_secs(120)),
    (8, Duration::from_secs(60)),
    (9, Duration::from_secs(30)),
    (10, Duration::from_secs(60)),
    (11, Duration::from_secs(10)),
];

fn main() -> ExitCode {
    let mut all = acceptance_plan(SEED);
    let mut failed = 0;
    for (criterion, limit) in LIMITS {
        let jobs: Vec<Job> = {
            let (mine, rest): (Vec<Job>, Vec<Job>) = all.into_iter().partition(|j| j.criterion == criterion);
            all = rest;
            mine
        };
        // fresh cache per criterion so each time includes its own realisation work
        let ctx = Context::new(BasisCache::new(), DEFAULT_DIMENSION_CAP);
        let start = Instant::now();
        let checks = run_jobs(&ctx, jobs, 1);
        let elapsed = start.elapsed();
        let bad: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
        let in_time = elapsed <= limit;
        let pass = bad.is_empty() && in_time && !checks.is_empty();
        println!(
            "A{criterion:<2} {}  {:<30} {:>3} checks  {:>9.3} s  (limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            criterion_name(criterion),
            checks.len(),
            elapsed.as_secs_f64(),
            limit.as_secs(),
        );
        for c in &bad {
            println!("      {}: computed {} predicted {}", c.id, c.computed, c.predicted);
        }
        if !in_time {
            println!("      time limit exceeded");
        }
        failed += usize::from(!pass);
    }
    assert!(all.is_empty(), "unscheduled acceptance jobs");
    println!("{} of {} criteria passed", LIMITS.len() - failed, LIMITS.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
