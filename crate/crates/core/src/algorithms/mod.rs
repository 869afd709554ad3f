//! Online algorithms and offline baselines.
//!
//! Every online algorithm runs through [`simulate`], which reveals a job's
//! processing time only after its test has been executed.

mod baselines;
mod beta_sort;
pub mod oracle;
mod sidle;
pub mod sim;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::job::Instance;
use crate::schedule::Schedule;

pub use baselines::{round_robin_objective, ImmediateInOrder, TestAllThenSpt};
pub use beta_sort::BetaSort;
pub use oracle::{ProcessingOracle, RevelationOracle};
pub use sidle::Sidle;
pub use sim::{simulate, OnlinePolicy, SimulationOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgorithmSpec {
    BetaSort { beta: f64 },
    Sidle { threshold: f64 },
    TestAllThenSpt,
    ImmediateInOrder,
}

impl AlgorithmSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AlgorithmSpec::BetaSort { beta } if !(beta > 0.0 && beta.is_finite()) => Err(
                Error::InvalidParameter(format!("beta must be positive, got {beta}")),
            ),
            AlgorithmSpec::Sidle { threshold } if !(threshold > 0.0 && threshold.is_finite()) => {
                Err(Error::InvalidParameter(format!(
                    "threshold y must be positive, got {threshold}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn policy(&self, test_times: &[f64]) -> Result<Box<dyn OnlinePolicy>> {
        self.validate()?;
        Ok(match *self {
            AlgorithmSpec::BetaSort { beta } => Box::new(BetaSort::new(beta, test_times)),
            AlgorithmSpec::Sidle { threshold } => Box::new(Sidle::new(threshold, test_times)),
            AlgorithmSpec::TestAllThenSpt => Box::new(TestAllThenSpt::new(test_times)),
            AlgorithmSpec::ImmediateInOrder => Box::new(ImmediateInOrder::new(test_times)),
        })
    }

    /// Runs against an arbitrary (possibly adaptive) oracle.
    pub fn run_with_oracle(
        &self,
        test_times: &[f64],
        oracle: &mut dyn ProcessingOracle,
    ) -> Result<SimulationOutcome> {
        let mut policy = self.policy(test_times)?;
        simulate(policy.as_mut(), test_times, oracle)
    }

    /// Runs on a fixed instance and hands back the oracle for auditing.
    pub fn run_audited(&self, instance: &Instance) -> Result<(Schedule, RevelationOracle)> {
        let mut oracle = RevelationOracle::new(instance);
        let out = self.run_with_oracle(&instance.test_times(), &mut oracle)?;
        Ok((out.schedule, oracle))
    }

    pub fn run(&self, instance: &Instance) -> Result<Schedule> {
        self.run_audited(instance).map(|(s, _)| s)
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmSpec::BetaSort { beta } => write!(f, "beta-sort(beta={beta})"),
            AlgorithmSpec::Sidle { threshold } => write!(f, "sidle(y={threshold})"),
            AlgorithmSpec::TestAllThenSpt => f.write_str("test-all-spt"),
            AlgorithmSpec::ImmediateInOrder => f.write_str("immediate"),
        }
    }
}

pub fn beta_sort(instance: &Instance, beta: f64) -> Result<Schedule> {
    AlgorithmSpec::BetaSort { beta }.run(instance)
}

pub fn sidle(instance: &Instance, threshold: f64) -> Result<Schedule> {
    AlgorithmSpec::Sidle { threshold }.run(instance)
}

pub fn test_all_then_spt(instance: &Instance) -> Schedule {
    AlgorithmSpec::TestAllThenSpt
        .run(instance)
        .expect("baseline has no parameters to reject")
}

pub fn immediate_in_order(instance: &Instance) -> Schedule {
    AlgorithmSpec::ImmediateInOrder
        .run(instance)
        .expect("baseline has no parameters to reject")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delay::optimal_objective;
    use crate::schedule::OpKind::*;

    fn order(s: &Schedule) -> Vec<(usize, crate::schedule::OpKind)> {
        s.operations().iter().map(|o| (o.job, o.kind)).collect()
    }

    #[test]
    fn beta_sort_fig1() {
        let inst = Instance::from_pairs([(0.0, 10.0), (9.5, 10.5)]).unwrap();
        let s = beta_sort(&inst, 1.0).unwrap();
        assert_eq!(
            order(&s),
            vec![(0, Test), (1, Test), (0, Processing), (1, Processing)]
        );
        assert_eq!(s.objective(), 49.5);
    }

    #[test]
    fn beta_sort_fig1_without_perturbation() {
        // Equal priorities: the pending test goes before the processing part.
        let inst = Instance::from_pairs([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let s = beta_sort(&inst, 1.0).unwrap();
        assert_eq!(s.objective(), 5.0);
    }

    #[test]
    fn beta_sort_fig2_tests_everything_first() {
        let k = 100;
        let eps = 1e-6;
        let inst = Instance::from_pairs(
            std::iter::repeat_n((0.0, 1.0), k)
                .chain(std::iter::repeat_n((1.0 - eps, 1.0 + eps), k)),
        )
        .unwrap();
        let s = beta_sort(&inst, 1.0).unwrap();
        assert!(s.operations()[..2 * k].iter().all(|o| o.kind == Test));
        assert!((s.objective() - 40100.0).abs() < 1.0);
    }

    #[test]
    fn beta_sort_single_job() {
        let inst = Instance::from_pairs([(3.0, 7.0)]).unwrap();
        for beta in [0.1, 1.0, 5.0] {
            assert_eq!(beta_sort(&inst, beta).unwrap().objective(), 10.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let inst = Instance::from_pairs([(3.0, 7.0)]).unwrap();
        assert!(beta_sort(&inst, 0.0).is_err());
        assert!(beta_sort(&inst, f64::NAN).is_err());
        assert!(sidle(&inst, -1.0).is_err());
    }

    #[test]
    fn sidle_all_short() {
        let inst = Instance::unit_tests(&[0.0, 0.0]).unwrap();
        let s = sidle(&inst, 0.5).unwrap();
        assert_eq!(s.completion_times(), &[1.0, 2.0]);
        assert_eq!(s.objective(), 3.0);
    }

    #[test]
    fn sidle_defers_long_job() {
        let inst = Instance::unit_tests(&[0.5, 2.0]).unwrap();
        let s = sidle(&inst, 1.35542).unwrap();
        assert_eq!(
            order(&s),
            vec![(0, Test), (0, Processing), (1, Test), (1, Processing)]
        );
        assert_eq!(s.completion_times(), &[1.5, 4.5]);
        assert_eq!(s.objective(), 6.0);
    }

    #[test]
    fn sidle_threshold_is_inclusive() {
        let inst = Instance::unit_tests(&[1.0, 0.0]).unwrap();
        let s = sidle(&inst, 1.0).unwrap();
        assert_eq!(s.operations()[1].kind, Processing);
        assert_eq!(s.operations()[1].job, 0);
    }

    #[test]
    fn sidle_long_jobs_in_spt_order() {
        let inst = Instance::unit_tests(&[5.0, 0.1, 3.0, 4.0]).unwrap();
        let s = sidle(&inst, 1.0).unwrap();
        let tail: Vec<usize> = s.operations()[5..].iter().map(|o| o.job).collect();
        assert_eq!(tail, vec![2, 3, 0]);
    }

    #[test]
    fn test_all_examples() {
        let s = test_all_then_spt(&Instance::unit_tests(&[0.0, 0.0, 0.0]).unwrap());
        assert_eq!(s.objective(), 9.0);
        let s = test_all_then_spt(&Instance::unit_tests(&[1.0, 1.0]).unwrap());
        assert_eq!(s.objective(), 7.0);
    }

    #[test]
    fn test_all_is_n_squared_plus_processing_spt() {
        let p = [3.0, 0.5, 2.0, 0.0, 1.25];
        let s = test_all_then_spt(&Instance::unit_tests(&p).unwrap());
        let mut sorted = p.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut acc = 0.0;
        let opt_p: f64 = sorted
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .sum();
        assert_eq!(s.objective(), 25.0 + opt_p);
    }

    #[test]
    fn immediate_runs_back_to_back() {
        let inst = Instance::from_pairs([(1.0, 2.0), (0.5, 0.0)]).unwrap();
        let s = immediate_in_order(&inst);
        assert_eq!(s.completion_times(), &[3.0, 3.5]);
    }

    #[test]
    fn round_robin_examples() {
        let inst = Instance::from_pairs([(0.5, 0.5), (1.0, 1.0)]).unwrap();
        assert_eq!(round_robin_objective(&inst), 5.0);
        let single = Instance::from_pairs([(2.0, 1.5)]).unwrap();
        assert_eq!(round_robin_objective(&single), 3.5);
        assert_eq!(round_robin_objective(&Instance::default()), 0.0);
    }

    #[test]
    fn round_robin_equal_jobs_ratio() {
        for n in [1usize, 2, 5, 40] {
            let inst = Instance::from_pairs(std::iter::repeat_n((0.25, 0.75), n)).unwrap();
            let rr = round_robin_objective(&inst);
            assert_eq!(rr, (n * n) as f64);
            let ratio = rr / optimal_objective(&inst);
            assert!((ratio - (2.0 - 2.0 / (n as f64 + 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn audited_run_has_no_violations() {
        let inst = Instance::from_pairs([(1.0, 2.0), (0.5, 3.0), (2.0, 0.1)]).unwrap();
        for spec in [
            AlgorithmSpec::BetaSort { beta: 1.0 },
            AlgorithmSpec::Sidle { threshold: 1.0 },
            AlgorithmSpec::TestAllThenSpt,
            AlgorithmSpec::ImmediateInOrder,
        ] {
            let (s, oracle) = spec.run_audited(&inst).unwrap();
            assert!(oracle.violations().is_empty());
            assert_eq!(oracle.reveal_log().len(), 3);
            s.check_against(&inst).unwrap();
        }
    }
}
