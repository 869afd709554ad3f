use crate::job::Instance;
use crate::schedule::OpKind;

use super::sim::OnlinePolicy;

/// Tests every job in input order, then runs all processing parts shortest
/// first.
#[derive(Debug)]
pub struct TestAllThenSpt {
    next_test: usize,
    n_jobs: usize,
    revealed: Vec<(f64, usize)>,
    sorted: bool,
}

impl TestAllThenSpt {
    pub fn new(test_times: &[f64]) -> Self {
        TestAllThenSpt {
            next_test: 0,
            n_jobs: test_times.len(),
            revealed: Vec::with_capacity(test_times.len()),
            sorted: false,
        }
    }
}

impl OnlinePolicy for TestAllThenSpt {
    fn next_operation(&mut self) -> Option<(usize, OpKind)> {
        if self.next_test < self.n_jobs {
            self.next_test += 1;
            return Some((self.next_test - 1, OpKind::Test));
        }
        if !self.sorted {
            // Popped from the back, so sort longest first.
            self.revealed
                .sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)));
            self.sorted = true;
        }
        self.revealed.pop().map(|(_, j)| (j, OpKind::Processing))
    }

    fn test_completed(&mut self, job: usize, processing_time: f64) {
        self.revealed.push((processing_time, job));
    }
}

/// Tests jobs in input order and processes each one right after its test.
#[derive(Debug)]
pub struct ImmediateInOrder {
    next: usize,
    n_jobs: usize,
    pending: Option<usize>,
}

impl ImmediateInOrder {
    pub fn new(test_times: &[f64]) -> Self {
        ImmediateInOrder {
            next: 0,
            n_jobs: test_times.len(),
            pending: None,
        }
    }
}

impl OnlinePolicy for ImmediateInOrder {
    fn next_operation(&mut self) -> Option<(usize, OpKind)> {
        if let Some(j) = self.pending.take() {
            return Some((j, OpKind::Processing));
        }
        if self.next < self.n_jobs {
            self.next += 1;
            return Some((self.next - 1, OpKind::Test));
        }
        None
    }

    fn test_completed(&mut self, job: usize, _: f64) {
        self.pending = Some(job);
    }
}

/// Sum of completion times of preemptive Round Robin run on whole jobs
/// (test plus processing as one unit of size `t + p`), all unfinished jobs
/// sharing the machine equally.
pub fn round_robin_objective(instance: &Instance) -> f64 {
    let mut sizes = instance.sizes();
    sizes.sort_by(f64::total_cmp);
    let n = sizes.len();
    let mut clock = 0.0;
    let mut prev = 0.0;
    let mut total = 0.0;
    for (i, &s) in sizes.iter().enumerate() {
        clock += (n - i) as f64 * (s - prev);
        prev = s;
        total += clock;
    }
    total
}
