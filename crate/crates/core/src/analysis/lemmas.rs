use serde::Serialize;

use crate::algorithms::beta_sort;
use crate::delay::{decompose, DelayDecomposition};
use crate::error::Result;
use crate::job::Instance;
use crate::numeric::{le_tol, REL_TOL};

use super::arcs::{classify, red_conditions, ArcClass};
use super::params::AnalysisParams;

/// Outcome of one family of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LemmaTally {
    pub name: &'static str,
    pub checked: usize,
    pub violations: Vec<String>,
    /// Largest delay ratio seen among the checked arcs, if the check is about
    /// ratios.
    pub worst_ratio: Option<f64>,
}

impl LemmaTally {
    fn new(name: &'static str) -> Self {
        LemmaTally {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(detail());
        }
    }

    fn observe(&mut self, ratio: f64) {
        self.worst_ratio = Some(self.worst_ratio.map_or(ratio, |w| w.max(ratio)));
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub red_orientation: LemmaTally,
    pub non_red: LemmaTally,
    pub universal_two: LemmaTally,
    pub blue: LemmaTally,
    pub green: LemmaTally,
    pub special: LemmaTally,
    pub interval: LemmaTally,
    pub prefix: LemmaTally,
}

impl LemmaReport {
    pub fn tallies(&self) -> [&LemmaTally; 8] {
        [
            &self.red_orientation,
            &self.non_red,
            &self.universal_two,
            &self.blue,
            &self.green,
            &self.special,
            &self.interval,
            &self.prefix,
        ]
    }

    pub fn passed(&self) -> bool {
        self.tallies().iter().all(|t| t.passed())
    }

    pub fn violation_count(&self) -> usize {
        self.tallies().iter().map(|t| t.violations.len()).sum()
    }
}

/// Runs 1-SORT on `instance` and checks every per-arc inequality and the two
/// structural properties of the red neighbourhoods.
pub fn verify_lemma_bounds(instance: &Instance, params: AnalysisParams) -> Result<LemmaReport> {
    let schedule = beta_sort(instance, 1.0)?;
    let dec = decompose(&schedule, instance)?;
    let class = classify(instance, params);
    Ok(check_lemmas(instance, &dec, &class))
}

pub(crate) fn check_lemmas(
    instance: &Instance,
    dec: &DelayDecomposition,
    class: &ArcClass,
) -> LemmaReport {
    let params = class.params();
    let bounds = params.bounds();
    let (mu, nu) = (params.mu(), params.nu());
    let n = instance.len();
    let le = |a: f64, b: f64| le_tol(a, b, REL_TOL);
    let job = |j: usize| instance.job(j);

    let mut red_orientation = LemmaTally::new("red-orientation");
    let mut non_red = LemmaTally::new("non-red");
    let mut universal_two = LemmaTally::new("universal-two");
    for a in 0..n {
        for b in 0..n {
            if a != b && red_conditions(instance, params, a, b) {
                red_orientation.record(le(job(a).size(), job(b).size()), || {
                    format!(
                        "red conditions hold for {a}->{b} but size {} > {}",
                        job(a).size(),
                        job(b).size()
                    )
                });
            }
        }
        for b in a + 1..n {
            let rho = dec.ratio(a, b);
            universal_two.observe(rho);
            universal_two.record(le(dec.pair(a, b), 2.0 * dec.optimal_pair(a, b)), || {
                format!("arc {a}-{b} has ratio {rho}")
            });
            if !class.pair_is_red(a, b) {
                non_red.observe(rho);
                non_red.record(
                    le(dec.pair(a, b), bounds.non_red * dec.optimal_pair(a, b)),
                    || format!("non-red arc {a}-{b} has ratio {rho} > {}", bounds.non_red),
                );
            }
        }
    }

    let mut blue = LemmaTally::new("blue");
    let mut green = LemmaTally::new("green");
    let mut interval = LemmaTally::new("interval");
    let mut prefix = LemmaTally::new("prefix");
    for &k in &class.v_r {
        let tk = job(k).test_time;
        let tails = class.in_red(k);
        for (x, &i) in tails.iter().enumerate() {
            for &j in &tails[x + 1..] {
                let opt = dec.optimal_pair(i, j);
                let rho = dec.ratio(i, j);
                blue.observe(rho);
                blue.record(le(tk, opt) && le(dec.pair(i, j), bounds.blue * opt), || {
                    format!(
                        "blue arc {i}-{j} for {k}: D*={opt}, t_k={tk}, ratio {rho} (bound {})",
                        bounds.blue
                    )
                });
            }
        }
        for &r in class.prior(k) {
            let opt = dec.optimal_pair(r, k);
            let rho = dec.ratio(r, k);
            green.observe(rho);
            green.record(
                le((nu + nu * nu) * tk, opt) && le(dec.pair(r, k), bounds.green * opt),
                || {
                    format!(
                        "green arc {r}-{k}: D*={opt}, t_k={tk}, ratio {rho} (bound {})",
                        bounds.green
                    )
                },
            );
        }

        let positions: Vec<usize> = tails
            .iter()
            .map(|&j| class.vi_position(j).unwrap())
            .collect();
        let contiguous = positions.windows(2).all(|w| w[1] == w[0] + 1);
        interval.record(contiguous, || {
            format!("red tails of {k} sit at V_I positions {positions:?}")
        });

        let last = *positions.last().expect("vertices of V_R have a red tail");
        for &r in class.prior(k) {
            let shared: Vec<bool> = tails.iter().map(|&j| class.is_red(j, r)).collect();
            let is_prefix = shared.windows(2).all(|w| w[0] || !w[1]);
            let beyond = class
                .in_red(r)
                .iter()
                .any(|&j| class.vi_position(j).unwrap() > last);
            prefix.record(is_prefix && !beyond, || {
                format!(
                    "red tails of {r} meet those of {k} as {shared:?}, extending beyond: {beyond}"
                )
            });
        }
    }

    let mut special = LemmaTally::new("special");
    for (i, j) in class.dual_roles() {
        let (ji, jj) = (job(i), job(j));
        let rho = dec.ratio(i, j);
        special.observe(rho);
        special.record(
            le(dec.pair(i, j), bounds.special * dec.optimal_pair(i, j)),
            || format!("dual-role arc {i}-{j} has ratio {rho} > {}", bounds.special),
        );
        let min_p = ji.processing_time.min(jj.processing_time);
        let min_t = ji.test_time.min(jj.test_time);
        special.record(
            ji.processing_time >= mu * ji.test_time && jj.processing_time >= mu * jj.test_time,
            || format!("dual-role arc {i}-{j} has an endpoint whose test is the longer part"),
        );
        for &k in &class.v_r {
            let tk = job(k).test_time;
            let tails = class.in_red(k);
            if tails.contains(&i) && tails.contains(&j) {
                special.record(le(tk, min_p), || {
                    format!("special blue part of {i}-{j} for {k}: min p {min_p} < t_k {tk}")
                });
            }
            if (k == i && class.prior(k).contains(&j)) || (k == j && class.prior(k).contains(&i)) {
                special.record(le(nu * tk, min_t), || {
                    format!(
                        "special green part of {i}-{j} for {k}: min t {min_t} < nu t_k {}",
                        nu * tk
                    )
                });
            }
        }
    }

    LemmaReport {
        red_orientation,
        non_red,
        universal_two,
        blue,
        green,
        special,
        interval,
        prefix,
    }
}
