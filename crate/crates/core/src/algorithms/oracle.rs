//! Sources of hidden processing times.

use crate::error::{Error, Result};
use crate::job::Instance;

/// Supplies a job's processing time at the moment its test completes.
///
/// The simulator is the only caller, and it calls `reveal` exactly once per
/// job, right after the job's test has finished. Implementations may decide
/// the value adaptively.
pub trait ProcessingOracle {
    fn reveal(&mut self, job: usize) -> f64;
}

/// Holds the processing times of a fixed instance and refuses to hand any of
/// them out before the corresponding test has completed.
#[derive(Debug, Clone)]
pub struct RevelationOracle {
    hidden: Vec<f64>,
    revealed: Vec<bool>,
    reveal_log: Vec<usize>,
    violations: Vec<usize>,
}

impl RevelationOracle {
    pub fn new(instance: &Instance) -> Self {
        RevelationOracle {
            hidden: instance.processing_times(),
            revealed: vec![false; instance.len()],
            reveal_log: Vec::with_capacity(instance.len()),
            violations: Vec::new(),
        }
    }

    pub fn is_revealed(&self, job: usize) -> bool {
        self.revealed[job]
    }

    /// Looks up an already revealed processing time. An early query is
    /// recorded as a violation and returned as an error.
    pub fn processing_time(&mut self, job: usize) -> Result<f64> {
        if self.revealed[job] {
            Ok(self.hidden[job])
        } else {
            self.violations.push(job);
            Err(Error::Unrevealed { job })
        }
    }

    /// Jobs in the order their tests completed.
    pub fn reveal_log(&self) -> &[usize] {
        &self.reveal_log
    }

    /// Jobs whose processing time was requested too early.
    pub fn violations(&self) -> &[usize] {
        &self.violations
    }
}

impl ProcessingOracle for RevelationOracle {
    fn reveal(&mut self, job: usize) -> f64 {
        self.revealed[job] = true;
        self.reveal_log.push(job);
        self.hidden[job]
    }
}
