use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::job::Instance;

/// How random jobs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distribution {
    /// `t` uniform on `[0, t_max]`, `p` uniform on `[0, p_max]`.
    Uniform { t_max: f64, p_max: f64 },
    /// `t = 1`, `p` uniform on `[0, p_max]`.
    UnitTests { p_max: f64 },
    /// Jobs on geometric scale levels `L = level_ratio^l`. With probability
    /// `q` a job is imbalanced: its longer part is `L` times a factor in
    /// `[1, 1 + spread]` and its shorter part is a uniform fraction of
    /// `longer / imbalance`, with the long side being the test or the
    /// processing part with equal odds. The fraction is drawn from
    /// `[short_min, 1]`. Otherwise the test time is `L` times
    /// a factor in `[1 - 2 spread, 1 + spread]` and `p/t` lies in
    /// `[1 - 2 spread, 1 + 4 spread]`. Consecutive levels make the
    /// imbalanced jobs of one level point red arcs at the next, and a
    /// `short_min` near 1 puts the short tests of one level right under the
    /// longer parts of the level below.
    Mixture {
        q: f64,
        levels: u32,
        level_ratio: f64,
        imbalance: f64,
        spread: f64,
        short_min: f64,
    },
}

impl Distribution {
    /// Mixture tuned to produce many red arcs for the analysis parameters
    /// near `mu = 6.16`, `nu = 0.86`.
    pub fn analysis_stress() -> Self {
        Distribution::Mixture {
            q: 0.7,
            levels: 2,
            level_ratio: 6.5,
            imbalance: 6.5,
            spread: 0.15,
            short_min: 0.85,
        }
    }

    /// Same mixture with short parts anywhere in `[0, longer / imbalance]`,
    /// which includes near-zero tests.
    pub fn analysis_stress_wide() -> Self {
        match Self::analysis_stress() {
            Distribution::Mixture {
                q,
                levels,
                level_ratio,
                imbalance,
                spread,
                ..
            } => Distribution::Mixture {
                q: q.min(0.5),
                levels,
                level_ratio,
                imbalance,
                spread,
                short_min: 0.0,
            },
            d => d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            Distribution::Uniform { t_max, p_max } if !(t_max >= 0.0 && p_max >= 0.0) => bad(
                format!("ranges must be nonnegative, got t_max={t_max}, p_max={p_max}"),
            ),
            Distribution::UnitTests { p_max } if p_max.is_nan() || p_max < 0.0 => {
                bad(format!("p_max must be nonnegative, got {p_max}"))
            }
            Distribution::Mixture {
                q,
                levels,
                level_ratio,
                imbalance,
                spread,
                short_min,
            } => {
                if !(0.0..=1.0).contains(&short_min) {
                    bad(format!("short_min must lie in [0,1], got {short_min}"))
                } else if !(0.0..=1.0).contains(&q) {
                    bad(format!("q must lie in [0,1], got {q}"))
                } else if levels == 0 {
                    bad("levels must be positive".into())
                } else if !(level_ratio > 0.0 && imbalance >= 1.0) {
                    bad(format!(
                        "need level_ratio > 0 and imbalance >= 1, got {level_ratio}, {imbalance}"
                    ))
                } else if !(0.0..0.5).contains(&spread) {
                    bad(format!("spread must lie in [0, 0.5), got {spread}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Draws `n` jobs; the same seed always yields the same instance.
pub fn random_instance(n: usize, seed: u64, dist: Distribution) -> Result<Instance> {
    dist.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(f64, f64)> = (0..n).map(|_| draw(&mut rng, dist)).collect();
    Instance::from_pairs(pairs)
}

fn draw(rng: &mut ChaCha8Rng, dist: Distribution) -> (f64, f64) {
    match dist {
        Distribution::Uniform { t_max, p_max } => {
            (rng.gen::<f64>() * t_max, rng.gen::<f64>() * p_max)
        }
        Distribution::UnitTests { p_max } => (1.0, rng.gen::<f64>() * p_max),
        Distribution::Mixture {
            q,
            levels,
            level_ratio,
            imbalance,
            spread,
            short_min,
        } => {
            let level = level_ratio.powi(rng.gen_range(0..levels) as i32);
            if rng.gen_bool(q) {
                let long = level * rng.gen_range(1.0..=1.0 + spread);
                let short = long / imbalance * rng.gen_range(short_min..=1.0);
                if rng.gen_bool(0.5) {
                    (short, long)
                } else {
                    (long, short)
                }
            } else {
                let t = level * rng.gen_range(1.0 - 2.0 * spread..=1.0 + spread);
                (
                    t,
                    t * rng.gen_range(1.0 - 2.0 * spread..=1.0 + 4.0 * spread),
                )
            }
        }
    }
}
