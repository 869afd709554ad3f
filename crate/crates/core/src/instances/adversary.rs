use crate::algorithms::{AlgorithmSpec, ProcessingOracle};
use crate::delay::optimal_objective;
use crate::error::{Error, Result};
use crate::job::Instance;

use super::family::RatioCheck;

/// Gives processing time 1 to the first `long` jobs whose tests finish and 0
/// to all later ones.
#[derive(Debug, Clone)]
pub struct AdaptiveAdversary {
    long: usize,
    tested: Vec<usize>,
}

impl AdaptiveAdversary {
    pub fn new(long: usize) -> Self {
        AdaptiveAdversary {
            long,
            tested: Vec::new(),
        }
    }

    /// Jobs in the order their tests completed.
    pub fn reveal_log(&self) -> &[usize] {
        &self.tested
    }
}

impl ProcessingOracle for AdaptiveAdversary {
    fn reveal(&mut self, job: usize) -> f64 {
        self.tested.push(job);
        if self.tested.len() <= self.long {
            1.0
        } else {
            0.0
        }
    }
}

/// Plays the adaptive adversary against `alg` on `n` unit-test jobs, with
/// `round(gamma n)` long jobs, and compares against the optimum of the
/// realised instance.
pub fn adversary_run(alg: AlgorithmSpec, n: usize, gamma: f64) -> Result<RatioCheck> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0,1], got {gamma}"
        )));
    }
    let long = (gamma * n as f64).round() as usize;
    let mut oracle = AdaptiveAdversary::new(long);
    let outcome = alg.run_with_oracle(&vec![1.0; n], &mut oracle)?;
    let realised = Instance::unit_tests(&outcome.revealed)?;
    outcome.schedule.check_against(&realised)?;
    Ok(RatioCheck::new(
        outcome.schedule.objective(),
        optimal_objective(&realised),
    ))
}
