use std::fmt;

use serde::Serialize;

use crate::algorithms::AlgorithmSpec;
use crate::analysis::optimize::{betasort_lower_bound, sidle_ratio_bound};
use crate::delay::optimal_objective;
use crate::error::{Error, Result};
use crate::job::Instance;
use crate::numeric::delay_ratio;

use super::random::{random_instance, Distribution};

/// Named instance families. Counts such as `gamma * n` are rounded to the
/// nearest integer, halves away from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `(0, M)` and `(M - eps, M + eps)`.
    Fig1 { m: f64, eps: f64 },
    /// `k` jobs `(0, M)` followed by `k` jobs `(M - eps, M + eps)`.
    Fig2 { k: usize, m: f64, eps: f64 },
    /// For `beta <= 1`: `gamma n` jobs `(0, M)`, then the rest
    /// `((M - 2 eps)/beta, M - eps)`.
    BetaLowerSmall {
        n: usize,
        beta: f64,
        gamma: f64,
        m: f64,
        eps: f64,
    },
    /// For `beta >= 1`: `gamma n` jobs `(1 + 2 eps, 0)`, then the rest
    /// `(1, beta + eps)`.
    BetaLowerLarge {
        n: usize,
        beta: f64,
        gamma: f64,
        eps: f64,
    },
    /// Unit tests in the order SIDLE handles worst: `(1 - alpha) n` jobs with
    /// `p = y + eps`, then `alpha (1 - gamma) n` with `p = y`, then
    /// `alpha gamma n` with `p = 0`.
    SidleTight {
        n: usize,
        y: f64,
        alpha: f64,
        gamma: f64,
        eps: f64,
    },
    Random {
        n: usize,
        seed: u64,
        dist: Distribution,
    },
}

fn count(x: f64) -> usize {
    x.round() as usize
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

/// `eps` must be positive and below half the scale so every generated
/// value stays nonnegative and ordered.
fn check_eps(eps: f64, scale: f64) -> Result<()> {
    check(eps > 0.0 && eps < scale / 2.0, || {
        format!("eps must lie in (0, {}), got {eps}", scale / 2.0)
    })
}

fn check_fraction(name: &str, x: f64) -> Result<()> {
    check((0.0..=1.0).contains(&x), || {
        format!("{name} must lie in [0,1], got {x}")
    })
}

fn repeat(count: usize, job: (f64, f64)) -> impl Iterator<Item = (f64, f64)> {
    std::iter::repeat_n(job, count)
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Fig1 { m, eps } | Family::Fig2 { m, eps, .. } => {
                check(m > 0.0 && m.is_finite(), || {
                    format!("M must be positive, got {m}")
                })?;
                check_eps(eps, m)
            }
            Family::BetaLowerSmall {
                beta,
                gamma,
                m,
                eps,
                ..
            } => {
                check(beta > 0.0 && beta <= 1.0, || {
                    format!("beta must lie in (0,1], got {beta}")
                })?;
                check_fraction("gamma", gamma)?;
                check(m > 0.0 && m.is_finite(), || {
                    format!("M must be positive, got {m}")
                })?;
                check_eps(eps, m)
            }
            Family::BetaLowerLarge {
                beta, gamma, eps, ..
            } => {
                check(beta >= 1.0 && beta.is_finite(), || {
                    format!("beta must be at least 1, got {beta}")
                })?;
                check_fraction("gamma", gamma)?;
                check_eps(eps, 1.0)
            }
            Family::SidleTight {
                y,
                alpha,
                gamma,
                eps,
                ..
            } => {
                check(y > 0.0 && y.is_finite(), || {
                    format!("y must be positive, got {y}")
                })?;
                check_fraction("alpha", alpha)?;
                check_fraction("gamma", gamma)?;
                check_eps(eps, 1.0)
            }
            Family::Random { dist, .. } => dist.validate(),
        }
    }

    /// `(eps, scale)` of the families built around a perturbation.
    fn perturbation(&self) -> Option<(f64, f64)> {
        match *self {
            Family::Fig1 { m, eps }
            | Family::Fig2 { m, eps, .. }
            | Family::BetaLowerSmall { m, eps, .. } => Some((eps, m)),
            Family::BetaLowerLarge { eps, .. } | Family::SidleTight { eps, .. } => Some((eps, 1.0)),
            Family::Random { .. } => None,
        }
    }

    /// Builds the instance. Values of `eps` above a hundredth of the scale
    /// are accepted with a warning since the limit formulas assume a tiny
    /// `eps`.
    pub fn generate(&self) -> Result<Instance> {
        self.validate()?;
        if let Some((eps, scale)) = self.perturbation().filter(|&(e, s)| e > s / 100.0) {
            log::warn!("eps = {eps} is large relative to the scale {scale}; limit formulas assume eps << scale");
        }
        match *self {
            Family::Fig1 { m, eps } => Instance::from_pairs([(0.0, m), (m - eps, m + eps)]),
            Family::Fig2 { k, m, eps } => {
                Instance::from_pairs(repeat(k, (0.0, m)).chain(repeat(k, (m - eps, m + eps))))
            }
            Family::BetaLowerSmall {
                n,
                beta,
                gamma,
                m,
                eps,
            } => {
                let short = count(gamma * n as f64).min(n);
                Instance::from_pairs(
                    repeat(short, (0.0, m))
                        .chain(repeat(n - short, ((m - 2.0 * eps) / beta, m - eps))),
                )
            }
            Family::BetaLowerLarge {
                n,
                beta,
                gamma,
                eps,
            } => {
                let short = count(gamma * n as f64).min(n);
                Instance::from_pairs(
                    repeat(short, (1.0 + 2.0 * eps, 0.0))
                        .chain(repeat(n - short, (1.0, beta + eps))),
                )
            }
            Family::SidleTight {
                n,
                y,
                alpha,
                gamma,
                eps,
            } => {
                let short = count(alpha * n as f64).min(n);
                let zero = count(alpha * gamma * n as f64).min(short);
                Instance::from_pairs(
                    repeat(n - short, (1.0, y + eps))
                        .chain(repeat(short - zero, (1.0, y)))
                        .chain(repeat(zero, (1.0, 0.0))),
                )
            }
            Family::Random { n, seed, dist } => random_instance(n, seed, dist),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Fig1 { .. } => "fig1",
            Family::Fig2 { .. } => "fig2",
            Family::BetaLowerSmall { .. } => "beta-lb-small",
            Family::BetaLowerLarge { .. } => "beta-lb-large",
            Family::SidleTight { .. } => "sidle-tight",
            Family::Random { .. } => "random",
        }
    }

    /// Builds a family from its name and `key=value` settings. Missing keys
    /// take defaults; the worst-case fractions default to the maximisers of
    /// the corresponding bound.
    pub fn from_settings(name: &str, settings: &[(String, String)]) -> Result<Self> {
        let mut s = Settings::new(settings);
        let family = match name {
            "fig1" => {
                let m = s.f64("M", 1.0)?;
                Family::Fig1 { m, eps: s.f64("eps", m * 1e-6)? }
            }
            "fig2" => {
                let m = s.f64("M", 1.0)?;
                Family::Fig2 { k: s.usize("k", 100)?, m, eps: s.f64("eps", m * 1e-6)? }
            }
            "beta-lb-small" => {
                let beta = s.f64("beta", 1.0)?;
                let m = s.f64("M", 1.0)?;
                let default_gamma = betasort_lower_bound(beta)?.gamma_star;
                Family::BetaLowerSmall {
                    n: s.usize("n", 1000)?,
                    beta,
                    gamma: s.f64("gamma", default_gamma)?,
                    m,
                    eps: s.f64("eps", m * 1e-6)?,
                }
            }
            "beta-lb-large" => {
                let beta = s.f64("beta", 2.0)?;
                let default_gamma = betasort_lower_bound(beta)?.gamma_star;
                Family::BetaLowerLarge {
                    n: s.usize("n", 1000)?,
                    beta,
                    gamma: s.f64("gamma", default_gamma)?,
                    eps: s.f64("eps", 1e-6)?,
                }
            }
            "sidle-tight" => {
                let y = s.f64("y", 1.3554157267758438)?;
                let (alpha, gamma) = if s.has("alpha") && s.has("gamma") {
                    (s.f64("alpha", 0.0)?, s.f64("gamma", 0.0)?)
                } else {
                    let worst = sidle_ratio_bound(y)?;
                    (s.f64("alpha", worst.alpha)?, s.f64("gamma", worst.gamma)?)
                };
                Family::SidleTight {
                    n: s.usize("n", 1000)?,
                    y,
                    alpha,
                    gamma,
                    eps: s.f64("eps", 1e-6)?,
                }
            }
            "random" => {
                let n = s.usize("n", 12)?;
                let seed = s.u64("seed", 0)?;
                let dist = match s.str("dist", "mixture").as_str() {
                    "uniform" => Distribution::Uniform {
                        t_max: s.f64("t_max", 1.0)?,
                        p_max: s.f64("p_max", 1.0)?,
                    },
                    "unit" => Distribution::UnitTests { p_max: s.f64("p_max", 3.0)? },
                    "mixture" => {
                        let Distribution::Mixture { q, levels, level_ratio, imbalance, spread, short_min } =
                            Distribution::analysis_stress()
                        else {
                            unreachable!()
                        };
                        Distribution::Mixture {
                            q: s.f64("q", q)?,
                            levels: s.usize("levels", levels as usize)? as u32,
                            level_ratio: s.f64("level_ratio", level_ratio)?,
                            imbalance: s.f64("imbalance", imbalance)?,
                            spread: s.f64("spread", spread)?,
                            short_min: s.f64("short_min", short_min)?,
                        }
                    }
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "unknown distribution `{other}` (expected uniform, unit or mixture)"
                        )))
                    }
                };
                Family::Random { n, seed, dist }
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family `{other}` (expected fig1, fig2, beta-lb-small, beta-lb-large, sidle-tight or random)"
                )))
            }
        };
        s.finish()?;
        family.validate()?;
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Fig1 { m, eps } => write!(f, "fig1(M={m}, eps={eps})"),
            Family::Fig2 { k, m, eps } => write!(f, "fig2(k={k}, M={m}, eps={eps})"),
            Family::BetaLowerSmall {
                n,
                beta,
                gamma,
                m,
                eps,
            } => {
                write!(
                    f,
                    "beta-lb-small(n={n}, beta={beta}, gamma={gamma}, M={m}, eps={eps})"
                )
            }
            Family::BetaLowerLarge {
                n,
                beta,
                gamma,
                eps,
            } => {
                write!(
                    f,
                    "beta-lb-large(n={n}, beta={beta}, gamma={gamma}, eps={eps})"
                )
            }
            Family::SidleTight {
                n,
                y,
                alpha,
                gamma,
                eps,
            } => {
                write!(
                    f,
                    "sidle-tight(n={n}, y={y}, alpha={alpha}, gamma={gamma}, eps={eps})"
                )
            }
            Family::Random { n, seed, .. } => write!(f, "random(n={n}, seed={seed})"),
        }
    }
}

/// `key=value` settings that must all be consumed.
struct Settings<'a> {
    pairs: &'a [(String, String)],
    used: Vec<bool>,
}

impl<'a> Settings<'a> {
    fn new(pairs: &'a [(String, String)]) -> Self {
        Settings {
            pairs,
            used: vec![false; pairs.len()],
        }
    }

    fn has(&self, key: &str) -> bool {
        self.pairs.iter().any(|(k, _)| k == key)
    }

    fn raw(&mut self, key: &str) -> Option<&'a str> {
        let pos = self.pairs.iter().rposition(|(k, _)| k == key)?;
        for (i, (k, _)) in self.pairs.iter().enumerate() {
            if k == key {
                self.used[i] = true;
            }
        }
        Some(self.pairs[pos].1.as_str())
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("{key}={v}: {e}"))),
        }
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        self.parse(key, default)
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        self.parse(key, default)
    }

    fn u64(&mut self, key: &str, default: u64) -> Result<u64> {
        self.parse(key, default)
    }

    fn str(&mut self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    fn finish(self) -> Result<()> {
        match self.pairs.iter().zip(&self.used).find(|(_, &u)| !u) {
            Some(((k, _), _)) => Err(Error::InvalidParameter(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Objectives of an algorithm and of the optimum on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCheck {
    pub alg: f64,
    pub opt: f64,
    pub ratio: f64,
}

impl RatioCheck {
    pub fn new(alg: f64, opt: f64) -> Self {
        RatioCheck {
            alg,
            opt,
            ratio: delay_ratio(alg, opt),
        }
    }
}

pub fn instance_ratio(instance: &Instance, alg: AlgorithmSpec) -> Result<RatioCheck> {
    let schedule = alg.run(instance)?;
    Ok(RatioCheck::new(
        schedule.objective(),
        optimal_objective(instance),
    ))
}

/// Runs `alg` and the optimum on the generated instance.
pub fn family_ratio_check(family: &Family, alg: AlgorithmSpec) -> Result<RatioCheck> {
    instance_ratio(&family.generate()?, alg)
}
