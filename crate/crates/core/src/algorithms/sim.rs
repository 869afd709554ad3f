//! Event loop that runs an online policy against a processing-time oracle.
//!
//! The policy only ever sees test times up front and each processing time
//! once the simulator has executed the matching test. Every choice is checked:
//! a test runs at most once, and a processing part only after its test.

use crate::error::{Error, Result};
use crate::schedule::{OpKind, Schedule, ScheduleBuilder};

use super::oracle::ProcessingOracle;

pub trait OnlinePolicy {
    /// The next operation to run, or `None` once the policy is done.
    fn next_operation(&mut self) -> Option<(usize, OpKind)>;

    /// Called when the test of `job` has finished.
    fn test_completed(&mut self, job: usize, processing_time: f64);
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum JobState {
    Untested,
    Tested(f64),
    Done,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub schedule: Schedule,
    /// Processing times as revealed during the run, indexed by job.
    pub revealed: Vec<f64>,
}

pub fn simulate(
    policy: &mut dyn OnlinePolicy,
    test_times: &[f64],
    oracle: &mut dyn ProcessingOracle,
) -> Result<SimulationOutcome> {
    let n = test_times.len();
    let mut state = vec![JobState::Untested; n];
    let mut revealed = vec![f64::NAN; n];
    let mut builder = ScheduleBuilder::new(n);
    while let Some((job, kind)) = policy.next_operation() {
        let illegal = || Error::IllegalChoice { job, kind };
        match (kind, state.get(job).copied().ok_or_else(illegal)?) {
            (OpKind::Test, JobState::Untested) => {
                builder.push(job, kind, test_times[job]);
                let p = oracle.reveal(job);
                if !(p.is_finite() && p >= 0.0) {
                    return Err(Error::InvalidJob {
                        job,
                        field: "processing time",
                        value: p,
                    });
                }
                state[job] = JobState::Tested(p);
                revealed[job] = p;
                policy.test_completed(job, p);
            }
            (OpKind::Processing, JobState::Tested(p)) => {
                builder.push(job, kind, p);
                state[job] = JobState::Done;
            }
            _ => return Err(illegal()),
        }
    }
    if let Some(j) = state.iter().position(|s| *s != JobState::Done) {
        return Err(Error::Structure(format!(
            "policy stopped before job {j} completed"
        )));
    }
    Ok(SimulationOutcome {
        schedule: builder.finish()?,
        revealed,
    })
}
