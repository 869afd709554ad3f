//! Pairwise delay accounting.
//!
//! For jobs `k != j`, `d(k, j)` is the amount of work of job `k` executed
//! before `j` completes. Every completion time then splits as
//! `C_j = size_j + sum_k d(k, j)`, and summing over all jobs gives
//! `sum C_j = sum size_j + sum_{j<k} D(j, k)` with `D(j, k) = d(j, k) + d(k, j)`.
//! In the optimal schedule `D*(j, k) = min(size_j, size_k)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::job::{Instance, Job};
use crate::numeric::delay_ratio;
use crate::schedule::{back_to_back, OpKind, Schedule};

#[derive(Debug, Clone, PartialEq)]
pub struct DelayDecomposition {
    sizes: Vec<f64>,
    /// Row-major `n x n`; entry `(k, j)` is `d(k, j)`.
    one_sided: Vec<f64>,
}

impl DelayDecomposition {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    /// `d(k, j)`: work of `k` done before `j` completes.
    pub fn one_sided(&self, k: usize, j: usize) -> f64 {
        self.one_sided[k * self.len() + j]
    }

    /// `D(j, k)`.
    pub fn pair(&self, j: usize, k: usize) -> f64 {
        self.one_sided(j, k) + self.one_sided(k, j)
    }

    /// `D*(j, k) = min(size_j, size_k)`.
    pub fn optimal_pair(&self, j: usize, k: usize) -> f64 {
        self.sizes[j].min(self.sizes[k])
    }

    pub fn ratio(&self, j: usize, k: usize) -> f64 {
        delay_ratio(self.pair(j, k), self.optimal_pair(j, k))
    }

    pub fn total_size(&self) -> f64 {
        self.sizes.iter().sum()
    }

    /// `sum_{j<k} D(j, k)`.
    pub fn total_pair_delay(&self) -> f64 {
        let n = self.len();
        (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .map(|(j, k)| self.pair(j, k))
            .sum()
    }

    /// `sum size_j + sum_{j<k} D(j, k)`, which reproduces the objective.
    pub fn objective(&self) -> f64 {
        self.total_size() + self.total_pair_delay()
    }

    /// `sum size_j + sum_{j<k} D*(j, k)`.
    pub fn optimal_objective(&self) -> f64 {
        let n = self.len();
        self.total_size()
            + (0..n)
                .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                .map(|(j, k)| self.optimal_pair(j, k))
                .sum::<f64>()
    }
}

pub fn decompose(schedule: &Schedule, instance: &Instance) -> Result<DelayDecomposition> {
    schedule.check_against(instance)?;
    let n = instance.len();
    let mut one_sided = vec![0.0; n * n];
    let mut done = vec![0.0; n];
    for (pos, op) in schedule.operations().iter().enumerate() {
        if op.kind == OpKind::Processing && schedule.finish_position(op.job) == pos {
            let j = op.job;
            for (k, &w) in done.iter().enumerate() {
                if k != j {
                    one_sided[k * n + j] = w;
                }
            }
        }
        done[op.job] += op.duration();
    }
    Ok(DelayDecomposition {
        sizes: instance.sizes(),
        one_sided,
    })
}

fn size_order(a: &Job, b: &Job) -> Ordering {
    a.size().total_cmp(&b.size()).then(a.id.cmp(&b.id))
}

/// Jobs sorted by size, ties by id.
pub fn spt_order(instance: &Instance) -> Vec<usize> {
    let mut jobs: Vec<&Job> = instance.jobs().iter().collect();
    jobs.sort_by(|a, b| size_order(a, b));
    jobs.into_iter().map(|j| j.id).collect()
}

/// The offline optimum: whole jobs in order of size, each test immediately
/// followed by its processing part.
pub fn optimal_schedule(instance: &Instance) -> (Schedule, f64) {
    let schedule = back_to_back(instance, &spt_order(instance))
        .expect("SPT order covers every job exactly once");
    let obj = schedule.objective();
    (schedule, obj)
}

/// Optimal objective without materialising the schedule.
pub fn optimal_objective(instance: &Instance) -> f64 {
    let mut sizes = instance.sizes();
    sizes.sort_by(f64::total_cmp);
    let n = sizes.len();
    sizes
        .iter()
        .enumerate()
        .map(|(i, s)| s * (n - i) as f64)
        .sum::<f64>()
        // Adding 0.0 turns the empty sum's -0.0 into 0.0.
        + 0.0
}

/// Sum of completion times when unit-test jobs run back to back in SPT
/// order: with `p` sorted descending this is `sum_j j (1 + p_j)`.
///
/// The closed form `n(n+1)/2 + sum p_j` that is sometimes quoted for this sum
/// is not equal to it (for `p = {2, 1, 0}` the sum is 10, not 9).
pub fn uniform_spt_sum(processing: &[f64]) -> f64 {
    let mut p = processing.to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    p.iter()
        .enumerate()
        .map(|(i, &pj)| (i + 1) as f64 * (1.0 + pj))
        .sum()
}

/// Outcome of 1-SORT on a two-job instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairLeaf {
    /// Leaf of the decision tree, `1..=6`.
    pub leaf: u8,
    /// `D(j, k)` for the pair.
    pub delay: f64,
}

/// Walks the decision tree of 1-SORT on the two jobs `first` and `second`,
/// with `first` playing the role of the smaller id on priority ties.
///
/// Leaves, with the execution order reached:
/// 1. `t_j p_j t_k p_k`, 2. `t_j t_k p_j p_k`, 3. `t_j t_k p_k p_j`,
/// 4. `t_k t_j p_j p_k`, 5. `t_k t_j p_k p_j`, 6. `t_k p_k t_j p_j`.
pub fn delay_tree_leaf(first: &Job, second: &Job) -> PairLeaf {
    let (tj, pj) = (first.test_time, first.processing_time);
    let (tk, pk) = (second.test_time, second.processing_time);
    let (leaf, delay) = if tj <= tk {
        if pj < tk {
            (1, tj + pj)
        } else if pj <= pk {
            (2, tj + pj + tk)
        } else {
            (3, tj + tk + pk)
        }
    } else if pk < tj {
        (6, tk + pk)
    } else if pj <= pk {
        (4, tj + pj + tk)
    } else {
        (5, tj + tk + pk)
    };
    PairLeaf { leaf, delay }
}

/// Decision-tree leaf for the arc from the strictly smaller job `j` to `k`.
/// Leaf 5 is unreachable here.
pub fn pairwise_delay_leaf(j: &Job, k: &Job) -> Result<PairLeaf> {
    if j.size() >= k.size() {
        return Err(Error::Precondition(format!(
            "arc must point to the larger job: size {} is not below {}",
            j.size(),
            k.size()
        )));
    }
    Ok(delay_tree_leaf(j, k))
}
