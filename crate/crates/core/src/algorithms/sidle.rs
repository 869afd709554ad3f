use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::schedule::OpKind;

use super::sim::OnlinePolicy;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Deferred {
    processing: f64,
    job: usize,
}

impl Eq for Deferred {}

impl Ord for Deferred {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.processing
            .total_cmp(&other.processing)
            .then(self.job.cmp(&other.job))
    }
}

impl PartialOrd for Deferred {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Threshold policy for unit tests: tests jobs in input order, runs a
/// processing part right after its test when it is at most `threshold`, and
/// defers longer ones to a trailing block in SPT order.
#[derive(Debug)]
pub struct Sidle {
    threshold: f64,
    next_test: usize,
    n_jobs: usize,
    immediate: Option<usize>,
    deferred: BinaryHeap<Reverse<Deferred>>,
}

impl Sidle {
    pub fn new(threshold: f64, test_times: &[f64]) -> Self {
        if test_times.iter().any(|&t| t != 1.0) {
            log::warn!("SIDLE is meant for unit test times; this instance has other test times");
        }
        Sidle {
            threshold,
            next_test: 0,
            n_jobs: test_times.len(),
            immediate: None,
            deferred: BinaryHeap::new(),
        }
    }
}

impl OnlinePolicy for Sidle {
    fn next_operation(&mut self) -> Option<(usize, OpKind)> {
        if let Some(job) = self.immediate.take() {
            return Some((job, OpKind::Processing));
        }
        if self.next_test < self.n_jobs {
            self.next_test += 1;
            return Some((self.next_test - 1, OpKind::Test));
        }
        self.deferred
            .pop()
            .map(|Reverse(d)| (d.job, OpKind::Processing))
    }

    fn test_completed(&mut self, job: usize, processing_time: f64) {
        if processing_time <= self.threshold {
            self.immediate = Some(job);
        } else {
            self.deferred.push(Reverse(Deferred {
                processing: processing_time,
                job,
            }));
        }
    }
}
