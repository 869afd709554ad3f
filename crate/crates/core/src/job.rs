//! Jobs and instances.
//!
//! A job consists of a test with a known duration and a processing part whose
//! duration is only revealed once the test has run. Instances keep the jobs in
//! the order they are presented; that order is part of the input and several
//! algorithms (and the adversarial families) depend on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: usize,
    pub test_time: f64,
    pub processing_time: f64,
}

impl Job {
    pub fn new(id: usize, test_time: f64, processing_time: f64) -> Result<Self> {
        check_duration(id, "test time", test_time)?;
        check_duration(id, "processing time", processing_time)?;
        Ok(Job {
            id,
            test_time,
            processing_time,
        })
    }

    /// Total duration `t + p`.
    pub fn size(&self) -> f64 {
        self.test_time + self.processing_time
    }

    /// `max(t, p)`.
    pub fn longer_part(&self) -> f64 {
        self.test_time.max(self.processing_time)
    }

    /// `min(t, p)`.
    pub fn shorter_part(&self) -> f64 {
        self.test_time.min(self.processing_time)
    }
}

fn check_duration(job: usize, field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidJob { job, field, value })
    }
}

/// An ordered job list. Job ids always equal their list position.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    jobs: Vec<Job>,
}

impl Instance {
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let jobs = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (t, p))| Job::new(id, t, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { jobs })
    }

    /// Every job with test time 1.
    pub fn unit_tests(processing: &[f64]) -> Result<Self> {
        Self::from_pairs(processing.iter().map(|&p| (1.0, p)))
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, id: usize) -> &Job {
        &self.jobs[id]
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn test_times(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.test_time).collect()
    }

    pub fn processing_times(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.processing_time).collect()
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.jobs.iter().map(Job::size).collect()
    }

    pub fn total_size(&self) -> f64 {
        self.jobs.iter().map(Job::size).sum()
    }

    pub fn has_unit_tests(&self) -> bool {
        self.jobs.iter().all(|j| j.test_time == 1.0)
    }

    /// The sub-instance made of the given jobs, renumbered in the given order.
    pub fn subset(&self, ids: &[usize]) -> Instance {
        Instance {
            jobs: ids
                .iter()
                .enumerate()
                .map(|(new_id, &id)| Job {
                    id: new_id,
                    ..self.jobs[id]
                })
                .collect(),
        }
    }
}
