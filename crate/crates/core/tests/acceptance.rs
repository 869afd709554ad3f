//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use testsched_core::algorithms::{beta_sort, round_robin_objective, sidle, AlgorithmSpec};
use testsched_core::analysis::{
    betasort_lower_bound, minimize_theorem1, optimize_sidle, sidle_ratio_bound, stress_instances,
    verify_campaign, AnalysisParams,
};
use testsched_core::delay::{decompose, optimal_objective};
use testsched_core::instances::{adversary_run, family_ratio_check, Family};
use testsched_core::Instance;

type Outcome = Result<String, String>;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut result = f();
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&result, limit) {
            if elapsed > limit {
                result = Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Outcome {
    if (got - want).abs() <= tol {
        Ok(format!("{label}={got:.6}"))
    } else {
        Err(format!("{label}={got} expected {want} +- {tol}"))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join(", "))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn random_pairs(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)),
            1 => (rng.gen_range(0.0..0.5), rng.gen_range(1.0..10.0)),
            _ => (rng.gen_range(1.0..10.0), rng.gen_range(0.0..0.5)),
        })
        .collect();
    Instance::from_pairs(pairs).unwrap()
}

/// Minimum over all job orders of the sum of completion times with each job
/// run test-then-processing without a break.
fn brute_force_opt(sizes: &[f64]) -> f64 {
    fn rec(sizes: &[f64], used: &mut [bool], clock: f64, acc: f64, best: &mut f64) {
        if used.iter().all(|&u| u) {
            *best = best.min(acc);
            return;
        }
        for i in 0..sizes.len() {
            if !used[i] {
                used[i] = true;
                rec(sizes, used, clock + sizes[i], acc + clock + sizes[i], best);
                used[i] = false;
            }
        }
    }
    if sizes.is_empty() {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    rec(sizes, &mut vec![false; sizes.len()], 0.0, 0.0, &mut best);
    best
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0 };
    let secs = Duration::from_secs;

    suite.check("1 minimize_theorem1", Some(secs(1)), || {
        let (mu, nu, rho) = minimize_theorem1().map_err(err)?;
        all(vec![
            within("mu0", mu, 6.16277, 1e-4),
            within("nu0", nu, 0.860389, 1e-5),
            within("rho", rho, 1.86039, 1e-4),
        ])
    });

    suite.check("2 optimize_sidle", Some(secs(5)), || {
        let o = optimize_sidle().map_err(err)?;
        let w = sidle_ratio_bound(o.y).map_err(err)?;
        all(vec![
            within("y0", o.y, 1.35542, 1e-3),
            within("rho0", o.rho, 1.58451, 1e-3),
            within("alpha", w.alpha, 0.644584, 1e-2),
            within("gamma", w.gamma, 0.737781, 1e-2),
        ])
    });

    suite.check("3 beta-sort lower bound", Some(secs(10)), || {
        let lb = betasort_lower_bound(1.0).map_err(err)?;
        let f = Family::BetaLowerSmall {
            n: 10_000,
            beta: 1.0,
            gamma: lb.gamma_star,
            m: 1.0,
            eps: 1e-6,
        };
        let r = family_ratio_check(&f, AlgorithmSpec::BetaSort { beta: 1.0 }).map_err(err)?;
        all(vec![
            within("measured(beta=1)", r.ratio, 1.6180, 1e-2),
            within(
                "closed(beta=0.5)",
                betasort_lower_bound(0.5).map_err(err)?.ratio,
                2.000,
                1e-3,
            ),
            within(
                "closed(beta=2)",
                betasort_lower_bound(2.0).map_err(err)?.ratio,
                1.851,
                1e-3,
            ),
        ])
    });

    suite.check("4 sqrt2 adversary", Some(secs(5)), || {
        let r = adversary_run(AlgorithmSpec::ImmediateInOrder, 10_000, 2f64.sqrt() - 1.0)
            .map_err(err)?;
        within("ratio", r.ratio, 2f64.sqrt(), 5e-3)
    });

    suite.check("5 Fig1 and Fig2", None, || {
        let one = AlgorithmSpec::BetaSort { beta: 1.0 };
        let f1 = family_ratio_check(&Family::Fig1 { m: 1.0, eps: 1e-6 }, one).map_err(err)?;
        let f2 = family_ratio_check(
            &Family::Fig2 {
                k: 100,
                m: 1.0,
                eps: 1e-6,
            },
            one,
        )
        .map_err(err)?;
        all(vec![
            within("fig1", f1.ratio, 1.25, 1e-4),
            within("fig2(k=100)", f2.ratio, 1.6, 2e-2),
        ])
    });

    suite.check("6 SIDLE tight instance", None, || {
        let o = optimize_sidle().map_err(err)?;
        let w = sidle_ratio_bound(o.y).map_err(err)?;
        let f = Family::SidleTight {
            n: 10_000,
            y: o.y,
            alpha: w.alpha,
            gamma: w.gamma,
            eps: 1e-6,
        };
        let r = family_ratio_check(&f, AlgorithmSpec::Sidle { threshold: o.y }).map_err(err)?;
        within("ratio", r.ratio, 1.58451, 1e-2)
    });

    let suite_start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20261018);

    suite.check("7a delay decomposition identity", None, || {
        let algs = [
            AlgorithmSpec::BetaSort { beta: 1.0 },
            AlgorithmSpec::BetaSort { beta: 0.6 },
            AlgorithmSpec::Sidle { threshold: 1.35542 },
            AlgorithmSpec::TestAllThenSpt,
            AlgorithmSpec::ImmediateInOrder,
        ];
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let n = rng.gen_range(1..=50);
            let inst = random_pairs(&mut rng, n);
            let s = algs[i % algs.len()].run(&inst).map_err(err)?;
            let d = decompose(&s, &inst).map_err(err)?;
            worst = worst.max((d.objective() - s.objective()).abs());
        }
        if worst <= 1e-9 {
            Ok(format!(
                "max |sum - objective| = {worst:.2e} over 1000 instances"
            ))
        } else {
            Err(format!("max |sum - objective| = {worst:.2e}"))
        }
    });

    suite.check("7b optimum equals brute force", None, || {
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let inst = random_pairs(&mut rng, n);
            let (fast, slow) = (optimal_objective(&inst), brute_force_opt(&inst.sizes()));
            if (fast - slow).abs() > 1e-9 * slow.max(1.0) {
                return Err(format!("{fast} vs brute force {slow} on {:?}", inst.jobs()));
            }
        }
        Ok("200 instances agree".into())
    });

    suite.check("7c 1-SORT pair delay at most twice optimal", None, || {
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let n = rng.gen_range(2..=30);
            let inst = random_pairs(&mut rng, n);
            let d = decompose(&beta_sort(&inst, 1.0).map_err(err)?, &inst).map_err(err)?;
            for j in 0..n {
                for k in j + 1..n {
                    let opt = d.optimal_pair(j, k);
                    let excess = d.pair(j, k) - 2.0 * opt;
                    if excess > 1e-9 * opt.max(1.0) {
                        return Err(format!("pair ({j},{k}) exceeds 2D* by {excess}"));
                    }
                    if opt > 0.0 {
                        worst = worst.max(d.pair(j, k) / opt);
                    }
                }
            }
        }
        Ok(format!("worst pair ratio {worst:.6}"))
    });

    suite.check("7d lemmas, prefix invariant and charging", None, || {
        let params = AnalysisParams::corollary();
        let mut instances = stress_instances(1000, 7, 12).map_err(err)?;
        for k in [2, 10, 50] {
            let f = Family::Fig2 {
                k,
                m: 1.0,
                eps: 1e-6,
            };
            instances.push((f.to_string(), f.generate().map_err(err)?));
        }
        let s = verify_campaign(&instances, params).map_err(err)?;
        if s.passed() {
            Ok(format!(
                "{} instances, {} groups, {} invariant checks, {} split arcs, 0 violations",
                s.instances, s.charging.groups, s.charging.invariant_checks, s.charging.split_arcs
            ))
        } else {
            Err(format!(
                "{} violations, first: {:?}",
                s.violation_count(),
                s.counterexamples.first()
            ))
        }
    });

    suite.check("7e competitive ratio bounds", None, || {
        let (_, _, rho) = minimize_theorem1().map_err(err)?;
        let o = optimize_sidle().map_err(err)?;
        let mut worst_sort = 0.0f64;
        let mut worst_sidle = 0.0f64;
        let mut instances: Vec<Instance> = stress_instances(500, 99, 12)
            .map_err(err)?
            .into_iter()
            .map(|(_, i)| i)
            .collect();
        instances.extend((0..500).map(|_| {
            let n = rng.gen_range(1..=40);
            random_pairs(&mut rng, n)
        }));
        for inst in &instances {
            let opt = optimal_objective(inst);
            if opt > 0.0 {
                worst_sort = worst_sort.max(beta_sort(inst, 1.0).map_err(err)?.objective() / opt);
            }
        }
        for i in 0..1000 {
            let n = rng.gen_range(1..=60);
            let inst = if i % 2 == 0 {
                let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
                Instance::unit_tests(&p).map_err(err)?
            } else {
                let f = Family::SidleTight {
                    n,
                    y: o.y_root,
                    alpha: rng.gen_range(0.0..=1.0),
                    gamma: rng.gen_range(0.0..=1.0),
                    eps: 1e-6,
                };
                f.generate().map_err(err)?
            };
            let opt = optimal_objective(&inst);
            if opt > 0.0 {
                worst_sidle =
                    worst_sidle.max(sidle(&inst, o.y_root).map_err(err)?.objective() / opt);
            }
        }
        if worst_sort > 1.86039 + 1e-6 {
            Err(format!("1-SORT ratio {worst_sort} exceeds {rho}"))
        } else if worst_sidle > 1.58451 + 1e-6 {
            Err(format!("SIDLE ratio {worst_sidle} exceeds 1.58451"))
        } else {
            Ok(format!(
                "worst 1-SORT {worst_sort:.6}, worst SIDLE {worst_sidle:.6}"
            ))
        }
    });

    suite.check("7f round robin bound", None, || {
        for _ in 0..200 {
            let n = rng.gen_range(1..=200);
            let inst = random_pairs(&mut rng, n);
            let bound = 2.0 - 2.0 / (n as f64 + 1.0);
            let r = round_robin_objective(&inst) / optimal_objective(&inst);
            if r > bound + 1e-9 {
                return Err(format!("ratio {r} exceeds {bound} at n={n}"));
            }
        }
        Ok("200 instances within 2 - 2/(n+1)".into())
    });

    let total = suite_start.elapsed();
    suite.check("7 property suite runtime", None, || {
        if total < secs(120) {
            Ok(format!("{total:.2?}"))
        } else {
            Err(format!("{total:.2?} exceeds 2 minutes"))
        }
    });

    if suite.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
