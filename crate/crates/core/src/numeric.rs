//! Small numerical routines: tolerant comparison, bisection, golden-section
//! search and a bounded compass search for local refinement.

use crate::error::{Error, Result};

/// Relative tolerance used for equality assertions throughout the crate.
pub const REL_TOL: f64 = 1e-9;

/// `|a - b| <= tol * max(|a|, |b|)`, with exact equality always accepted.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// `a <= b` up to a relative slack.
pub fn le_tol(a: f64, b: f64, tol: f64) -> bool {
    a <= b || a - b <= tol * a.abs().max(b.abs())
}

/// Ratio of an algorithm's delay to the optimal one; `0/0` counts as 1.
pub fn delay_ratio(alg: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        alg / opt
    } else if alg <= 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

pub const BISECTION_STEPS: usize = 200;

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Numerical(format!(
            "root not bracketed on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All sign changes of `f` on a uniform scan of `[lo, hi]`, each refined by
/// bisection, in increasing order.
pub fn bracketed_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cells: usize,
) -> Result<Vec<f64>> {
    let step = (hi - lo) / cells as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=cells {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(bisect(&f, a, b)?);
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(a);
    }
    Ok(roots)
}

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
pub fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Compass search maximising `f` over the box `[lo, hi]^2`, starting from
/// `start` with step `step` and halving it until it drops below `tol`.
pub fn compass_max<F: Fn(f64, f64) -> f64>(
    f: F,
    start: (f64, f64),
    step: f64,
    tol: f64,
    lo: f64,
    hi: f64,
) -> ((f64, f64), f64) {
    let mut best = start;
    let mut best_val = f(start.0, start.1);
    let mut h = step;
    while h >= tol {
        let mut moved = false;
        for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let cand = ((best.0 + dx).clamp(lo, hi), (best.1 + dy).clamp(lo, hi));
            let v = f(cand.0, cand.1);
            if v > best_val {
                best = cand;
                best_val = v;
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (best, best_val)
}
