//! Non-preemptive single-machine schedules of test and processing operations.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::job::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Test,
    Processing,
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpKind::Test => f.write_str("test"),
            OpKind::Processing => f.write_str("processing"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Operation {
    #[serde(rename = "job_id")]
    pub job: usize,
    pub kind: OpKind,
    pub start: f64,
    pub end: f64,
}

impl Operation {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// A validated schedule: operations in execution order, back to back from
/// time zero, each job tested before it is processed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    ops: Vec<Operation>,
    completion: Vec<f64>,
    /// Position in `ops` of each job's processing operation.
    finish_pos: Vec<usize>,
}

impl Schedule {
    pub fn empty() -> Self {
        Schedule::default()
    }

    /// Validates an operation list covering jobs `0..n_jobs`.
    pub fn from_operations(ops: Vec<Operation>, n_jobs: usize) -> Result<Self> {
        let makespan = ops.last().map_or(0.0, |o| o.end);
        let tol = 1e-9 * makespan.abs().max(1.0);
        let mut test_pos = vec![None; n_jobs];
        let mut finish_pos = vec![None; n_jobs];
        let mut clock = 0.0;
        for (i, op) in ops.iter().enumerate() {
            if op.job >= n_jobs {
                return Err(Error::Structure(format!(
                    "operation {i} refers to job {} but there are {n_jobs} jobs",
                    op.job
                )));
            }
            if !(op.start.is_finite() && op.end.is_finite()) || op.end < op.start {
                return Err(Error::Structure(format!(
                    "operation {i} has invalid interval [{}, {}]",
                    op.start, op.end
                )));
            }
            if op.start < clock - tol {
                return Err(Error::Structure(format!(
                    "operation {i} starts at {} before the machine is free at {clock}",
                    op.start
                )));
            }
            if op.start > clock + tol {
                return Err(Error::Structure(format!(
                    "idle time before operation {i}: machine free at {clock}, next start {}",
                    op.start
                )));
            }
            clock = op.end;
            let slot = match op.kind {
                OpKind::Test => &mut test_pos[op.job],
                OpKind::Processing => {
                    if test_pos[op.job].is_none() {
                        return Err(Error::Structure(format!(
                            "job {} is processed before it is tested",
                            op.job
                        )));
                    }
                    &mut finish_pos[op.job]
                }
            };
            if slot.replace(i).is_some() {
                return Err(Error::Structure(format!(
                    "job {} has two {} operations",
                    op.job, op.kind
                )));
            }
        }
        let finish_pos = finish_pos
            .into_iter()
            .enumerate()
            .map(|(j, p)| p.ok_or_else(|| Error::Structure(format!("job {j} is never processed"))))
            .collect::<Result<Vec<_>>>()?;
        let completion = finish_pos.iter().map(|&p| ops[p].end).collect();
        Ok(Schedule {
            ops,
            completion,
            finish_pos,
        })
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn n_jobs(&self) -> usize {
        self.completion.len()
    }

    /// Completion times indexed by job id.
    pub fn completion_times(&self) -> &[f64] {
        &self.completion
    }

    pub fn completion(&self, job: usize) -> f64 {
        self.completion[job]
    }

    pub(crate) fn finish_position(&self, job: usize) -> usize {
        self.finish_pos[job]
    }

    /// Sum of completion times.
    pub fn objective(&self) -> f64 {
        // Adding 0.0 turns the empty sum's -0.0 into 0.0.
        self.completion.iter().sum::<f64>() + 0.0
    }

    pub fn makespan(&self) -> f64 {
        self.ops.last().map_or(0.0, |o| o.end)
    }

    /// Checks that the schedule runs exactly the instance's jobs with the
    /// instance's durations.
    pub fn check_against(&self, instance: &Instance) -> Result<()> {
        if self.n_jobs() != instance.len() {
            return Err(Error::Mismatch(format!(
                "schedule covers {} jobs, instance has {}",
                self.n_jobs(),
                instance.len()
            )));
        }
        let tol = 1e-9 * self.makespan().max(1.0);
        for op in &self.ops {
            let job = instance.job(op.job);
            let want = match op.kind {
                OpKind::Test => job.test_time,
                OpKind::Processing => job.processing_time,
            };
            if (op.duration() - want).abs() > tol {
                return Err(Error::Mismatch(format!(
                    "{} of job {} lasts {} but should last {want}",
                    op.kind,
                    op.job,
                    op.duration()
                )));
            }
        }
        Ok(())
    }

    /// Writes the `job_id,kind,start,end` CSV trace.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.ops.is_empty() {
            w.write_record(["job_id", "kind", "start", "end"])?;
        }
        for op in &self.ops {
            w.serialize(op)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, n_jobs: usize) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let ops = r
            .deserialize()
            .collect::<std::result::Result<Vec<Operation>, _>>()?;
        Self::from_operations(ops, n_jobs)
    }
}

/// Sum of completion times of a schedule.
pub fn objective(schedule: &Schedule) -> f64 {
    schedule.objective()
}

/// Appends operations back to back starting at time zero.
#[derive(Debug)]
pub struct ScheduleBuilder {
    n_jobs: usize,
    clock: f64,
    ops: Vec<Operation>,
}

impl ScheduleBuilder {
    pub fn new(n_jobs: usize) -> Self {
        ScheduleBuilder {
            n_jobs,
            clock: 0.0,
            ops: Vec::with_capacity(2 * n_jobs),
        }
    }

    pub fn now(&self) -> f64 {
        self.clock
    }

    pub fn push(&mut self, job: usize, kind: OpKind, duration: f64) -> &Operation {
        let start = self.clock;
        self.clock += duration;
        self.ops.push(Operation {
            job,
            kind,
            start,
            end: self.clock,
        });
        self.ops.last().unwrap()
    }

    pub fn finish(self) -> Result<Schedule> {
        Schedule::from_operations(self.ops, self.n_jobs)
    }
}

/// Builds the schedule running `order` back to back on `instance`.
pub fn sequence(instance: &Instance, order: &[(usize, OpKind)]) -> Result<Schedule> {
    let mut b = ScheduleBuilder::new(instance.len());
    for &(job, kind) in order {
        if job >= instance.len() {
            return Err(Error::Structure(format!("unknown job {job}")));
        }
        let j = instance.job(job);
        let d = match kind {
            OpKind::Test => j.test_time,
            OpKind::Processing => j.processing_time,
        };
        b.push(job, kind, d);
    }
    b.finish()
}

/// Each job's test immediately followed by its processing, in the given job order.
pub fn back_to_back(instance: &Instance, job_order: &[usize]) -> Result<Schedule> {
    let order: Vec<_> = job_order
        .iter()
        .flat_map(|&j| [(j, OpKind::Test), (j, OpKind::Processing)])
        .collect();
    sequence(instance, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use OpKind::*;

    fn fig1() -> Instance {
        Instance::from_pairs([(0.0, 10.0), (9.5, 10.5)]).unwrap()
    }

    #[test]
    fn fig1_one_sort_order_objective() {
        let s = sequence(
            &fig1(),
            &[(0, Test), (1, Test), (0, Processing), (1, Processing)],
        )
        .unwrap();
        assert_eq!(s.completion_times(), &[19.5, 30.0]);
        assert_eq!(objective(&s), 49.5);
    }

    #[test]
    fn empty_schedule_has_zero_objective() {
        let s = Schedule::from_operations(vec![], 0).unwrap();
        assert_eq!(s.objective(), 0.0);
        assert_eq!(Schedule::empty().objective(), 0.0);
    }

    #[test]
    fn single_job() {
        let inst = Instance::from_pairs([(1.0, 2.0)]).unwrap();
        let s = back_to_back(&inst, &[0]).unwrap();
        assert_eq!(s.objective(), 3.0);
        s.check_against(&inst).unwrap();
    }

    #[test]
    fn rejects_overlap() {
        let ops = vec![
            Operation {
                job: 0,
                kind: Test,
                start: 0.0,
                end: 2.0,
            },
            Operation {
                job: 0,
                kind: Processing,
                start: 1.0,
                end: 3.0,
            },
        ];
        assert!(matches!(
            Schedule::from_operations(ops, 1),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn rejects_missing_processing() {
        let ops = vec![Operation {
            job: 0,
            kind: Test,
            start: 0.0,
            end: 2.0,
        }];
        assert!(matches!(
            Schedule::from_operations(ops, 1),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn rejects_processing_before_test() {
        let ops = vec![
            Operation {
                job: 0,
                kind: Processing,
                start: 0.0,
                end: 1.0,
            },
            Operation {
                job: 0,
                kind: Test,
                start: 1.0,
                end: 2.0,
            },
        ];
        assert!(Schedule::from_operations(ops, 1).is_err());
    }

    #[test]
    fn rejects_idle_time() {
        let ops = vec![
            Operation {
                job: 0,
                kind: Test,
                start: 0.0,
                end: 1.0,
            },
            Operation {
                job: 0,
                kind: Processing,
                start: 2.0,
                end: 3.0,
            },
        ];
        assert!(Schedule::from_operations(ops, 1).is_err());
    }

    #[test]
    fn duration_mismatch_is_reported() {
        let s = back_to_back(&fig1(), &[0, 1]).unwrap();
        let other = Instance::from_pairs([(0.0, 10.0), (9.0, 10.5)]).unwrap();
        assert!(matches!(s.check_against(&other), Err(Error::Mismatch(_))));
    }

    #[test]
    fn csv_trace_round_trips() {
        let s = sequence(
            &fig1(),
            &[(0, Test), (1, Test), (0, Processing), (1, Processing)],
        )
        .unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("job_id,kind,start,end\n0,test,0.0,0.0\n"));
        let back = Schedule::read_csv(&buf[..], 2).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn empty_trace_still_has_header() {
        let mut buf = Vec::new();
        Schedule::empty().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "job_id,kind,start,end\n");
    }
}
