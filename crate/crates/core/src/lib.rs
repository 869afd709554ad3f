//! Single-machine scheduling with obligatory tests, minimizing the sum of
//! completion times.
//!
//! A job has a known test time `t` and a processing time `p` that becomes
//! known only once its test has run. The crate provides online algorithms,
//! an exact delay-based evaluation, adversarial instance families and the
//! numerical side of the competitive analysis.

pub mod algorithms;
pub mod analysis;
pub mod delay;
pub mod error;
pub mod instances;
pub mod job;
pub mod numeric;
pub mod schedule;

pub use algorithms::AlgorithmSpec;
pub use delay::{decompose, optimal_objective, DelayDecomposition};
pub use error::{Error, Result};
pub use instances::{Family, RatioCheck};
pub use job::{Instance, Job};
pub use schedule::{OpKind, Operation, Schedule};
