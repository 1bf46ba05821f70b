//! Job plans: the configurable suite and the fixed acceptance parameters.

use std::ops::RangeInclusive;

use prolong_core::flat::killing::DEFAULT_DEGREE_CAP;
use prolong_core::flat::MetricField;
use prolong_core::linalg::rat;
use prolong_core::prolong::{check_cap, cochain_dims_predicted, DEFAULT_DIMENSION_CAP};

use crate::checks::*;
use crate::error::CliError;
use crate::report::Job;

pub const MAX_N: usize = 6;
pub const MAX_ELL: usize = 4;
pub const CHRISTOFFEL_SAMPLES: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub n_range: RangeInclusive<usize>,
    pub ell_range: RangeInclusive<usize>,
    pub max_degree: u32,
    pub dimension_cap: usize,
    pub jobs: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_range: 2..=3,
            ell_range: 1..=2,
            max_degree: DEFAULT_DEGREE_CAP,
            dimension_cap: DEFAULT_DIMENSION_CAP,
            jobs: 1,
            seed: 0x5eed,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let (n0, n1) = (*self.n_range.start(), *self.n_range.end());
        let (l0, l1) = (*self.ell_range.start(), *self.ell_range.end());
        if n0 < 2 || n1 > MAX_N || n0 > n1 {
            return Err(CliError::Usage(format!("--n range must lie within 2..{MAX_N}, got {n0}..{n1}")));
        }
        if l0 < 1 || l1 > MAX_ELL || l0 > l1 {
            return Err(CliError::Usage(format!("--ell range must lie within 1..{MAX_ELL}, got {l0}..{l1}")));
        }
        if self.jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        if self.max_degree < 4 {
            return Err(CliError::Usage("--max-degree must be at least 4".into()));
        }
        for n in self.n_range.clone() {
            for ell in self.ell_range.clone() {
                check_cap(&cochain_dims_predicted(n, ell), self.dimension_cap)?;
            }
        }
        Ok(())
    }
}

fn pairs(ns: RangeInclusive<usize>, ells: RangeInclusive<usize>) -> Vec<(usize, usize)> {
    ns.flat_map(|n| ells.clone().map(move |l| (n, l))).collect()
}

/// Builder that numbers jobs within each criterion in insertion order.
#[derive(Default)]
struct Plan<'a> {
    jobs: Vec<Job<'a>>,
}

impl<'a> Plan<'a> {
    fn push<F>(&mut self, criterion: u8, f: F)
    where
        F: Fn(&Context) -> Check + Send + Sync + 'a,
    {
        let order = self.jobs.iter().filter(|j| j.criterion == criterion).count();
        self.jobs.push(Job::new(criterion, order, f));
    }
}

pub fn suite_plan(cfg: &SuiteConfig) -> Vec<Job<'static>> {
    let ns = cfg.n_range.clone();
    let grid = pairs(ns.clone(), cfg.ell_range.clone());
    let composite = cfg.max_degree - 1;
    let spanning = cfg.max_degree - 2;
    let seed = cfg.seed;
    let mut plan = Plan::default();
    for n in ns.clone() {
        plan.push(1, move |_| a1_key(n));
    }
    for &(n, l) in &grid {
        plan.push(2, move |c| a2_partial_squared(c, n, l));
    }
    for &(n, l) in &grid {
        plan.push(3, move |c| a3_cohomology(c, n, l));
    }
    for &(n, l) in &grid {
        plan.push(4, move |c| a4_kostant(c, n, l));
    }
    for n in ns.clone() {
        plan.push(5, move |_| a5_killing_dim(n));
    }
    for &(n, l) in &grid {
        plan.push(6, move |_| a6_degree_bound(n, l));
    }
    for n in ns.clone() {
        plan.push(7, move |_| a7_range(n, composite, spanning));
    }
    for n in ns.clone() {
        plan.push(8, move |_| a8_tractor_flat(MetricField::flat(n), "flat"));
    }
    if ns.contains(&2) {
        plan.push(8, |_| a8_tractor_flat(MetricField::stereographic(2, rat(1)), "stereographic"));
    }
    for n in ns.clone() {
        plan.push(8, move |_| a8_negative_control(n, seed));
    }
    for &(n, l) in &grid {
        plan.push(9, move |_| a9_injectivity(n, l));
    }
    for &(n, l) in &grid {
        plan.push(10, move |c| a10_graded_exactness(c, n, l));
    }
    for n in ns {
        plan.push(11, move |_| a11_christoffel(n, CHRISTOFFEL_SAMPLES, seed));
    }
    plan.jobs
}

/// The parameters of the acceptance criteria.
pub fn acceptance_plan(seed: u64) -> Vec<Job<'static>> {
    let mut plan = Plan::default();
    for n in 2..=6 {
        plan.push(1, move |_| a1_key(n));
    }
    for (n, l) in pairs(2..=4, 1..=3) {
        plan.push(2, move |c| a2_partial_squared(c, n, l));
    }
    for (n, l) in pairs(2..=4, 1..=3) {
        plan.push(3, move |c| a3_cohomology(c, n, l));
    }
    for (n, l) in pairs(2..=3, 1..=2) {
        plan.push(4, move |c| a4_kostant(c, n, l));
    }
    for n in 2..=4 {
        plan.push(5, move |_| a5_killing_dim(n));
    }
    for (n, l) in pairs(2..=3, 1..=2) {
        plan.push(6, move |_| a6_degree_bound(n, l));
    }
    for n in 2..=3 {
        plan.push(7, move |_| a7_range(n, 5, 4));
    }
    for n in 2..=3 {
        plan.push(8, move |_| a8_tractor_flat(MetricField::flat(n), "flat"));
    }
    plan.push(8, |_| a8_tractor_flat(MetricField::stereographic(2, rat(1)), "stereographic"));
    plan.push(8, move |_| a8_negative_control(3, seed));
    for (n, l) in pairs(2..=3, 1..=3) {
        plan.push(9, move |_| a9_injectivity(n, l));
    }
    for l in 1..=2 {
        plan.push(10, move |c| a10_graded_exactness(c, 3, l));
    }
    for n in 2..=5 {
        plan.push(11, move |_| a11_christoffel(n, CHRISTOFFEL_SAMPLES, seed));
    }
    plan.jobs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_criterion_is_planned() {
        let mut crit: Vec<u8> = suite_plan(&SuiteConfig::default()).iter().map(|j| j.criterion).collect();
        crit.dedup();
        assert_eq!(crit, (1..=11).collect::<Vec<_>>());
        let mut crit: Vec<u8> = acceptance_plan(1).iter().map(|j| j.criterion).collect();
        crit.dedup();
        assert_eq!(crit, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let bad = SuiteConfig { n_range: 1..=3, ..SuiteConfig::default() };
        assert!(bad.validate().is_err());
        let capped = SuiteConfig { n_range: 5..=5, ell_range: 4..=4, ..SuiteConfig::default() };
        assert!(capped.validate().unwrap_err().to_string().contains("dimension cap exceeded"));
        assert!(SuiteConfig::default().validate().is_ok());
    }
}
