use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::schedule::OpKind;

use super::sim::OnlinePolicy;

/// Queue entry ordered by priority, then tests before processing parts, then
/// job id.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    priority: f64,
    kind: OpKind,
    job: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then(self.kind.cmp(&other.kind))
            .then(self.job.cmp(&other.job))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always runs the available operation of smallest priority, where an
/// untested job's test has priority `beta * t` and a tested job's processing
/// part has priority `p`.
#[derive(Debug)]
pub struct BetaSort {
    queue: BinaryHeap<Reverse<Entry>>,
}

impl BetaSort {
    pub fn new(beta: f64, test_times: &[f64]) -> Self {
        let queue = test_times
            .iter()
            .enumerate()
            .map(|(job, &t)| {
                Reverse(Entry {
                    priority: beta * t,
                    kind: OpKind::Test,
                    job,
                })
            })
            .collect();
        BetaSort { queue }
    }
}

impl OnlinePolicy for BetaSort {
    fn next_operation(&mut self) -> Option<(usize, OpKind)> {
        self.queue.pop().map(|Reverse(e)| (e.job, e.kind))
    }

    fn test_completed(&mut self, job: usize, processing_time: f64) {
        self.queue.push(Reverse(Entry {
            priority: processing_time,
            kind: OpKind::Processing,
            job,
        }));
    }
}
