//! Job scheduling and report assembly.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::checks::{Check, Context};

pub const SCHEMA_VERSION: u32 = 1;

type JobFn<'a> = Box<dyn Fn(&Context) -> Check + Send + Sync + 'a>;

/// A deferred check; reports are ordered by `(criterion, order)`.
pub struct Job<'a> {
    pub criterion: u8,
    pub order: usize,
    run: JobFn<'a>,
}

impl<'a> Job<'a> {
    pub fn new<F>(criterion: u8, order: usize, run: F) -> Self
    where
        F: Fn(&Context) -> Check + Send + Sync + 'a,
    {
        Job { criterion, order, run: Box::new(run) }
    }
}

/// Run `jobs` on `workers` threads, then sort by check id.
pub fn run_jobs(ctx: &Context, jobs: Vec<Job<'_>>, workers: usize) -> Vec<Check> {
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(u8, usize, Check)>> = Mutex::new(Vec::with_capacity(jobs.len()));
    let workers = workers.clamp(1, jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let check = (job.run)(ctx);
                done.lock().expect("results lock").push((job.criterion, job.order, check));
            });
        }
    });
    let mut done = done.into_inner().expect("results lock");
    done.sort_by_key(|(c, o, _)| (*c, *o));
    done.into_iter().map(|(_, _, c)| c).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    /// Wall times are kept only when `timings` is set, so that default
    /// reports are byte-identical across runs.
    pub fn new(command: Vec<String>, mut checks: Vec<Check>, timings: bool) -> Self {
        if !timings {
            for c in &mut checks {
                c.wall_ms = None;
            }
        }
        let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect();
        let summary = Summary { total: checks.len(), passed: checks.len() - failed.len(), failed };
        Report { schema_version: SCHEMA_VERSION, command, checks, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:<4}  name", "check", "ok");
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let _ = write!(out, "{:<width$}  {verdict}  {}", c.id, c.name);
            if let Some(ms) = c.wall_ms {
                let _ = write!(out, "  ({ms} ms)");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}/{} checks passed", self.summary.passed, self.summary.total);
        for id in &self.summary.failed {
            let _ = writeln!(out, "failed: {id}");
        }
        out
    }
}
