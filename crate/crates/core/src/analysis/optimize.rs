//! Numerical reproduction of the closed-form bounds: the optimal analysis
//! parameters for 1-SORT, the SIDLE threshold, and the lower-bound curves.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, bracketed_roots, compass_max, golden_min};

use super::params::{theorem1_rho, AnalysisParams};

/// `mu^5 - 4mu^4 - 11mu^3 - 13mu^2 - 8mu - 2`, whose only real root is the
/// optimal `mu`.
pub fn theorem1_polynomial(mu: f64) -> f64 {
    ((((mu - 4.0) * mu - 11.0) * mu - 13.0) * mu - 8.0) * mu - 2.0
}

/// Result of scanning the feasible `(mu, nu)` region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub feasible_points: usize,
    pub best_mu: f64,
    pub best_nu: f64,
    pub best_rho: f64,
}

fn scan_theorem1(mu_range: (f64, f64), nu_range: (f64, f64), cells: usize, acc: &mut GridCheck) {
    for a in 0..=cells {
        let mu = mu_range.0 + (mu_range.1 - mu_range.0) * a as f64 / cells as f64;
        for b in 0..=cells {
            let nu = nu_range.0 + (nu_range.1 - nu_range.0) * b as f64 / cells as f64;
            if let Ok(p) = AnalysisParams::new(mu, nu) {
                acc.feasible_points += 1;
                let rho = theorem1_rho(p);
                if rho < acc.best_rho {
                    acc.best_mu = mu;
                    acc.best_nu = nu;
                    acc.best_rho = rho;
                }
            }
        }
    }
}

/// Grid search of the bound over the feasible region: a coarse pass over
/// `mu in [1.01, 40]`, `nu in [0.6, 0.999]` followed by a fine pass around
/// the coarse winner.
pub fn theorem1_grid_check() -> GridCheck {
    let mut acc = GridCheck {
        feasible_points: 0,
        best_mu: f64::NAN,
        best_nu: f64::NAN,
        best_rho: f64::INFINITY,
    };
    scan_theorem1((1.01, 40.0), (0.6, 0.999), 200, &mut acc);
    let (mu, nu) = (acc.best_mu, acc.best_nu);
    scan_theorem1(
        ((mu - 0.5).max(1.01), mu + 0.5),
        ((nu - 0.01).max(0.6), (nu + 0.01).min(0.999)),
        200,
        &mut acc,
    );
    acc
}

/// Returns `(mu0, nu0, rho)`: the root of [`theorem1_polynomial`] on
/// `[1, 20]`, `nu0 = mu0/(mu0+1)` and the bound at that point. Fails if the
/// grid search finds a feasible point that is better by more than `1e-6`.
pub fn minimize_theorem1() -> Result<(f64, f64, f64)> {
    static CACHE: OnceLock<Result<(f64, f64, f64)>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let mu = bisect(theorem1_polynomial, 1.0, 20.0)?;
            let nu = mu / (mu + 1.0);
            let rho = (2.0 * mu + 1.0) / (mu + 1.0);
            let grid = theorem1_grid_check();
            if grid.best_rho < rho - 1e-6 {
                return Err(Error::Numerical(format!(
                    "grid point mu={}, nu={} gives {} below the root value {rho}",
                    grid.best_mu, grid.best_nu, grid.best_rho
                )));
            }
            Ok((mu, nu, rho))
        })
        .clone()
}

/// The SIDLE ratio expression for threshold `y` when an `alpha` fraction of
/// jobs is short and a `gamma` fraction of those has processing time 0.
pub fn sidle_ratio(alpha: f64, gamma: f64, y: f64) -> f64 {
    let ag = alpha * gamma;
    let a2 = alpha * alpha;
    let num = 1.0 - a2 / 2.0 + y / 2.0 * (1.0 + 2.0 * a2 * gamma - ag * ag - 2.0 * ag);
    let den = 0.5 + y / 2.0 * (1.0 + ag * ag - 2.0 * ag);
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidleBound {
    pub rho: f64,
    pub alpha: f64,
    pub gamma: f64,
}

/// Grid maximum over `[0,1]^2` with `cells` cells per side, refined by
/// compass search down to `tol`. Ties keep the lexicographically smaller
/// `(alpha, gamma)`.
fn sidle_max(y: f64, cells: usize, tol: f64) -> SidleBound {
    let h = 1.0 / cells as f64;
    let mut best = (0.0, 0.0);
    let mut best_val = f64::NEG_INFINITY;
    for a in 0..=cells {
        let alpha = a as f64 * h;
        for g in 0..=cells {
            let gamma = g as f64 * h;
            let v = sidle_ratio(alpha, gamma, y);
            if v > best_val {
                best_val = v;
                best = (alpha, gamma);
            }
        }
    }
    let ((alpha, gamma), rho) = compass_max(|a, g| sidle_ratio(a, g, y), best, h, tol, 0.0, 1.0);
    SidleBound { rho, alpha, gamma }
}

/// Worst-case ratio of SIDLE with threshold `y`, together with the maximising
/// `(alpha, gamma)`.
pub fn sidle_ratio_bound(y: f64) -> Result<SidleBound> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "y must be nonnegative, got {y}"
        )));
    }
    Ok(sidle_max(y, 1000, 1e-7))
}

/// `2y^3 - 9y^2 + 10y - 2`.
pub fn sidle_polynomial(y: f64) -> f64 {
    ((2.0 * y - 9.0) * y + 10.0) * y - 2.0
}

/// Closed-form SIDLE ratio at a root of [`sidle_polynomial`].
pub fn sidle_closed_form(y: f64) -> f64 {
    let y2 = y * y;
    0.5 * (1.0 - y + y2 + (9.0 - 2.0 * y - y2 - 2.0 * y2 * y + y2 * y2).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidleOptimum {
    /// Minimiser found by the search.
    pub y: f64,
    pub rho: f64,
    /// Second-smallest real root of [`sidle_polynomial`].
    pub y_root: f64,
    /// [`sidle_closed_form`] at `y_root`.
    pub rho_closed: f64,
}

/// Minimises the SIDLE ratio over `y in (0, 5]` and cross-checks the result
/// against the cubic's root and the closed form.
pub fn optimize_sidle() -> Result<SidleOptimum> {
    static CACHE: OnceLock<Result<SidleOptimum>> = OnceLock::new();
    CACHE.get_or_init(search_sidle).clone()
}

fn search_sidle() -> Result<SidleOptimum> {
    let coarse = |y: f64| sidle_max(y, 100, 1e-9).rho;
    let mut best_y = 0.01;
    let mut best_rho = f64::INFINITY;
    for i in 1..=500 {
        let y = i as f64 * 0.01;
        let r = coarse(y);
        if r < best_rho {
            best_rho = r;
            best_y = y;
        }
    }
    let (y, _) = golden_min(coarse, best_y - 0.01, best_y + 0.01, 1e-9);
    let rho = sidle_ratio_bound(y)?.rho;

    let roots = bracketed_roots(sidle_polynomial, 0.0, 5.0, 500)?;
    let y_root = *roots
        .get(1)
        .ok_or_else(|| Error::Numerical(format!("expected three roots, found {roots:?}")))?;
    let rho_closed = sidle_closed_form(y_root);
    if (y - y_root).abs() > 1e-4 || (rho - rho_closed).abs() > 1e-4 {
        return Err(Error::Numerical(format!(
            "search gives y={y}, rho={rho} but the closed form gives y={y_root}, rho={rho_closed}"
        )));
    }
    Ok(SidleOptimum {
        y,
        rho,
        y_root,
        rho_closed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLowerBound {
    pub ratio: f64,
    pub gamma_star: f64,
}

/// Lower bound on the competitive ratio of beta-SORT and the short-job
/// fraction that attains it.
pub fn betasort_lower_bound(beta: f64) -> Result<BetaLowerBound> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be positive, got {beta}"
        )));
    }
    Ok(if beta <= 1.0 {
        BetaLowerBound {
            ratio: 0.5 * (((beta + 4.0) / beta).sqrt() + 1.0),
            gamma_star: (beta + 2.0 - (beta * (beta + 4.0)).sqrt()) / 2.0,
        }
    } else {
        let b2 = beta * beta;
        BetaLowerBound {
            ratio: ((4.0 * beta * (b2 + beta - 1.0) + 1.0).sqrt() + 1.0) / (2.0 * beta),
            gamma_star: (-1.0 + 2.0 * beta + 2.0 * b2
                - (1.0 - 4.0 * beta + 4.0 * b2 + 4.0 * b2 * beta).sqrt())
                / (2.0 * b2),
        }
    })
}

/// Short-job fraction of the adversary after rounding `gamma * n` to the
/// nearest integer.
pub fn adversary_fraction(gamma: f64, n: usize) -> f64 {
    (gamma * n as f64).round() / n as f64
}

/// Ratio forced by the uniform-test adversary on `n` jobs when the first
/// `round(gamma n)` tested jobs get processing time 1.
pub fn sqrt2_adversary_ratio(gamma: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0,1], got {gamma}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let g = adversary_fraction(gamma, n);
    let lin = (1.0 + g) / n as f64;
    Ok((1.0 + 2.0 * g - g * g + lin) / (g * g + 1.0 + lin))
}

/// Limit of [`sqrt2_adversary_ratio`] as `n` grows.
pub fn sqrt2_adversary_limit(gamma: f64) -> f64 {
    (1.0 + 2.0 * gamma - gamma * gamma) / (gamma * gamma + 1.0)
}
