//! Batch verification of the per-arc lemmas and the charging construction.

use serde::Serialize;

use crate::algorithms::beta_sort;
use crate::delay::decompose;
use crate::error::Result;
use crate::instances::{random_instance, Distribution};
use crate::job::Instance;

use super::arcs::classify;
use super::charging::build;
use super::lemmas::check_lemmas;
use super::params::AnalysisParams;

/// Kept counterexamples per campaign.
const MAX_COUNTEREXAMPLES: usize = 10;
const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSummary {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    pub worst_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargingSummary {
    pub vertices: usize,
    pub groups: usize,
    pub invariant_checks: usize,
    pub split_arcs: usize,
    pub violations: usize,
    pub worst_group_ratio: Option<f64>,
    pub worst_vertex_ratio: Option<f64>,
    /// Group ratios binned over `[1, 2]`; the last bin also takes anything
    /// above 2.
    pub group_ratio_histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub source: String,
    pub jobs: Vec<(f64, f64)>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub mu: f64,
    pub nu: f64,
    pub rho_bound: f64,
    pub instances: usize,
    /// Largest 1-SORT ALG/OPT over the campaign.
    pub worst_ratio: Option<f64>,
    pub lemmas: Vec<LemmaSummary>,
    pub charging: ChargingSummary,
    pub counterexamples: Vec<Counterexample>,
}

impl VerifySummary {
    pub fn new(params: AnalysisParams) -> Self {
        VerifySummary {
            mu: params.mu(),
            nu: params.nu(),
            rho_bound: params.bounds().rho(),
            instances: 0,
            worst_ratio: None,
            lemmas: Vec::new(),
            charging: ChargingSummary {
                vertices: 0,
                groups: 0,
                invariant_checks: 0,
                split_arcs: 0,
                violations: 0,
                worst_group_ratio: None,
                worst_vertex_ratio: None,
                group_ratio_histogram: (0..HISTOGRAM_BINS)
                    .map(|i| HistogramBin {
                        lo: 1.0 + i as f64 / HISTOGRAM_BINS as f64,
                        hi: 1.0 + (i + 1) as f64 / HISTOGRAM_BINS as f64,
                        count: 0,
                    })
                    .collect(),
            },
            counterexamples: Vec::new(),
        }
    }

    pub fn violation_count(&self) -> usize {
        self.lemmas.iter().map(|l| l.violations).sum::<usize>() + self.charging.violations
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }

    /// Checks one instance and folds the outcome into the summary.
    pub fn add(&mut self, source: impl Into<String>, instance: &Instance) -> Result<()> {
        let params = AnalysisParams::new(self.mu, self.nu)?;
        let schedule = beta_sort(instance, 1.0)?;
        let dec = decompose(&schedule, instance)?;
        let class = classify(instance, params);
        let lemmas = check_lemmas(instance, &dec, &class);
        let report = build(instance, &dec, &class);

        self.instances += 1;
        if !instance.is_empty() {
            self.worst_ratio = Some(max_opt(self.worst_ratio, report.ratio));
        }
        if self.lemmas.is_empty() {
            self.lemmas = lemmas
                .tallies()
                .iter()
                .map(|t| LemmaSummary {
                    name: t.name,
                    checked: 0,
                    violations: 0,
                    worst_ratio: None,
                })
                .collect();
        }
        let mut messages = Vec::new();
        for (acc, t) in self.lemmas.iter_mut().zip(lemmas.tallies()) {
            acc.checked += t.checked;
            acc.violations += t.violations.len();
            if let Some(w) = t.worst_ratio {
                acc.worst_ratio = Some(max_opt(acc.worst_ratio, w));
            }
            messages.extend(t.violations.iter().map(|v| format!("{}: {v}", t.name)));
        }

        let c = &mut self.charging;
        c.vertices += report.vertices.len();
        c.invariant_checks += report.invariant_log.len();
        c.split_arcs += report.split_arcs.len();
        c.violations += report.violations.len();
        for v in &report.vertices {
            c.worst_vertex_ratio = Some(max_opt(c.worst_vertex_ratio, v.ratio));
        }
        for g in report.groups() {
            c.groups += 1;
            c.worst_group_ratio = Some(max_opt(c.worst_group_ratio, g.ratio));
            let bin = (((g.ratio - 1.0) * HISTOGRAM_BINS as f64).floor().max(0.0) as usize)
                .min(HISTOGRAM_BINS - 1);
            c.group_ratio_histogram[bin].count += 1;
        }
        messages.extend(report.violations.iter().map(|v| format!("charging: {v}")));

        if !messages.is_empty() && self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(Counterexample {
                source: source.into(),
                jobs: instance
                    .jobs()
                    .iter()
                    .map(|j| (j.test_time, j.processing_time))
                    .collect(),
                messages,
            });
        }
        Ok(())
    }
}

fn max_opt(acc: Option<f64>, x: f64) -> f64 {
    acc.map_or(x, |a| a.max(x))
}

/// `count` random instances with between 2 and `max_n` jobs, alternating the
/// two stress mixtures. Instance `i` is drawn with seed `seed + i`.
pub fn stress_instances(count: usize, seed: u64, max_n: usize) -> Result<Vec<(String, Instance)>> {
    let max_n = max_n.max(2);
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let n = 2 + (s % (max_n as u64 - 1)) as usize;
            let (name, dist) = if i % 2 == 0 {
                ("stress", Distribution::analysis_stress())
            } else {
                ("stress-wide", Distribution::analysis_stress_wide())
            };
            Ok((
                format!("{name}(n={n}, seed={s})"),
                random_instance(n, s, dist)?,
            ))
        })
        .collect()
}

pub fn verify_campaign<'a, I>(instances: I, params: AnalysisParams) -> Result<VerifySummary>
where
    I: IntoIterator<Item = &'a (String, Instance)>,
{
    let mut summary = VerifySummary::new(params);
    for (source, instance) in instances {
        summary.add(source.clone(), instance)?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_is_clean_and_deterministic() {
        let inst = stress_instances(40, 11, 10).unwrap();
        let a = verify_campaign(&inst, AnalysisParams::corollary()).unwrap();
        assert!(a.passed(), "{:?}", a.counterexamples);
        assert_eq!(a.instances, 40);
        assert_eq!(
            a,
            verify_campaign(&inst, AnalysisParams::corollary()).unwrap()
        );
        let binned: usize = a
            .charging
            .group_ratio_histogram
            .iter()
            .map(|b| b.count)
            .sum();
        assert_eq!(binned, a.charging.groups);
    }
}
