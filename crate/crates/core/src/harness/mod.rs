//! Randomized and exhaustive comparison of the dilatation oracle against the closed forms.

mod report;
pub mod sample;
mod suites;

use std::collections::BTreeMap;

pub use report::{CaseRecord, Counterexample, Mismatch, Suite, SuiteParams, SuiteReport, REPORT_SCHEMA};
pub use suites::CHECKS;

use crate::error::Result;
use suites::{evaluate, random_case, sweep, Case, TrialResult};

/// How the trials of a run are scheduled. Reports do not depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is off.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

fn map_trials<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

fn trial_case(suite: Suite, params: &SuiteParams, seed: u64, fixed: &[Case], trial: usize) -> Result<Case> {
    match fixed.get(trial) {
        Some(c) => Ok(c.clone()),
        None => {
            let k = trial - fixed.len();
            let mut rng = sample::trial_rng(seed, trial);
            random_case(suite, params, &mut rng, k)
        }
    }
}

fn trial_count(suite: Suite, params: &SuiteParams, fixed: usize) -> usize {
    match suite {
        Suite::Algebra => params.trials * CHECKS.len(),
        _ => fixed + params.trials,
    }
}

/// Run a suite with the default scheduling.
pub fn run_suite(suite: Suite, params: &SuiteParams, seed: u64) -> Result<SuiteReport> {
    run_suite_with(suite, params, seed, Execution::default())
}

pub fn run_suite_with(suite: Suite, params: &SuiteParams, seed: u64, exec: Execution) -> Result<SuiteReport> {
    params.validate(suite)?;
    let fixed = sweep(suite, params);
    let n = trial_count(suite, params, fixed.len());
    let results = map_trials(n, exec, |trial| -> Result<(Case, TrialResult)> {
        let case = trial_case(suite, params, seed, &fixed, trial)?;
        let r = evaluate(suite, params, &case);
        Ok((case, r))
    });
    let mut counters = BTreeMap::new();
    let mut failures = Vec::new();
    let mut passed = 0;
    for (trial, r) in results.into_iter().enumerate() {
        let (case, r) = r?;
        for (k, v) in r.counters {
            *counters.entry(k).or_insert(0) += v;
        }
        if r.mismatches.is_empty() {
            passed += 1;
        } else {
            failures.push(Counterexample { trial, case: case.record(), mismatches: r.mismatches });
        }
    }
    Ok(SuiteReport {
        schema: REPORT_SCHEMA,
        suite,
        params: params.clone(),
        seed,
        attempted: n,
        passed,
        counters,
        failures,
    })
}

/// Re-run a recorded case; an empty result means it now passes.
pub fn replay(suite: Suite, params: &SuiteParams, case: &CaseRecord) -> Result<Vec<Mismatch>> {
    params.validate(suite)?;
    let case = Case::from_record(case)?;
    Ok(evaluate(suite, params, &case).mismatches)
}
