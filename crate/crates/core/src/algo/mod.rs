//! Seeded simulators for elitist evolutionary algorithms.
//!
//! Counting conventions: `iterations` is the index of the iteration that
//! first generates an optimum (0 when an initial individual is optimal), and
//! `evaluations` counts every fitness evaluation including the initial ones.
//! A run that exhausts its iteration budget is censored with
//! `iterations == budget`.

mod bits;
mod mutation;
mod perm;
mod samples;
mod sssp;

use std::fmt;
use std::str::FromStr;

pub use bits::{
    run_ea_best_of_mu, run_mu_plus_one, run_mu_plus_one_observed, run_ollga, run_one_plus_lambda,
    run_one_plus_one, run_one_plus_one_observed, run_random_search,
};
pub use mutation::{mutate, MutationOp};
pub use perm::run_sorting_ea;
pub use samples::{
    collect_records, collect_samples, BitAlgo, RunConfig, SampleMeta, SampleSet, Task,
    DEFAULT_BUDGET,
};
pub use sssp::{poisson_one, run_sssp_ea, Retarget};

use crate::error::{domain, Error, Result};
use crate::rng::GENERATOR_ID;

/// Which runtime measure a sample set records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Iterations,
    Evaluations,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Iterations => "iterations",
            Metric::Evaluations => "evaluations",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iterations" => Ok(Metric::Iterations),
            "evaluations" => Ok(Metric::Evaluations),
            _ => domain(format!(
                "unknown metric {s:?}; valid ids: iterations, evaluations"
            )),
        }
    }
}

/// One simulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub algo_id: String,
    pub bench_id: String,
    pub n: usize,
    pub seed: u64,
    pub iterations: u64,
    pub evaluations: u64,
    pub censored: bool,
    pub budget: u64,
    pub generator: &'static str,
}

impl RunRecord {
    pub fn value(&self, metric: Metric) -> u64 {
        match metric {
            Metric::Iterations => self.iterations,
            Metric::Evaluations => self.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Outcome {
    pub iterations: u64,
    pub evaluations: u64,
    pub censored: bool,
}

impl Outcome {
    pub(crate) fn value(&self, metric: Metric) -> u64 {
        match metric {
            Metric::Iterations => self.iterations,
            Metric::Evaluations => self.evaluations,
        }
    }

    pub(crate) fn record(
        self,
        algo_id: String,
        bench_id: String,
        n: usize,
        seed: u64,
        budget: u64,
    ) -> RunRecord {
        RunRecord {
            algo_id,
            bench_id,
            n,
            seed,
            iterations: self.iterations,
            evaluations: self.evaluations,
            censored: self.censored,
            budget,
            generator: GENERATOR_ID,
        }
    }
}

pub(crate) fn check_budget(budget: u64) -> Result<()> {
    if budget < 1 {
        return domain("budget must be at least 1");
    }
    Ok(())
}
