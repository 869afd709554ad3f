use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algorithms::beta_sort;
use crate::delay::{decompose, DelayDecomposition};
use crate::error::Result;
use crate::job::Instance;
use crate::numeric::{delay_ratio, le_tol, rel_close, REL_TOL};

use super::arcs::{classify, pair, ArcClass, Pair};
use super::params::{AnalysisParams, RatioBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcRole {
    Red,
    Green,
    SpecialGreen,
    Blue,
    SpecialBlue,
}

/// An arc, or one part of a split arc, with the delays charged to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargedArc {
    pub role: ArcRole,
    pub ends: Pair,
    pub alg: f64,
    pub opt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// The vertex with its only red arc.
    SingleRed,
    /// The vertex with one of several red arcs.
    VertexRed,
    RedsGreen,
    RedsSpecialGreen,
    RedsBlue,
    /// A green arc left over once every red arc has a partner.
    ExtraGreen,
    ExtraSpecialGreen,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargingGroup {
    pub kind: GroupKind,
    pub arcs: Vec<ChargedArc>,
    pub alg: f64,
    pub opt: f64,
    pub ratio: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChargeCase {
    SingleRed,
    GreenOnly,
    WithBlue,
}

/// The set `C_k` built for one vertex with incoming red arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCharge {
    pub vertex: usize,
    pub case: ChargeCase,
    /// Red tails in `V_I` order.
    pub red_tails: Vec<usize>,
    pub prior: Vec<usize>,
    /// Blue arcs used up here, in selection order.
    pub blue: Vec<Pair>,
    pub groups: Vec<ChargingGroup>,
    pub alg: f64,
    pub opt: f64,
    pub ratio: f64,
}

/// One evaluation of the blue-arc budget right after `vertex` was processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub vertex: usize,
    pub from: usize,
    pub used: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargingReport {
    pub params: AnalysisParams,
    pub bounds: RatioBounds,
    pub vertices: Vec<VertexCharge>,
    pub invariant_log: Vec<InvariantCheck>,
    /// Arcs split into a special blue and a special green part.
    pub split_arcs: Vec<Pair>,
    pub leftover_vertices: usize,
    pub leftover_arcs: usize,
    pub leftover_worst_ratio: Option<f64>,
    pub alg: f64,
    pub opt: f64,
    pub ratio: f64,
    pub violations: Vec<String>,
}

impl ChargingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn groups(&self) -> impl Iterator<Item = &ChargingGroup> {
        self.vertices.iter().flat_map(|v| v.groups.iter())
    }
}

/// Runs 1-SORT and builds the charging sets `C_k`, checking every group
/// bound, the blue-arc budget after each vertex, and the final accounting.
pub fn charging(instance: &Instance, params: AnalysisParams) -> Result<ChargingReport> {
    let schedule = beta_sort(instance, 1.0)?;
    let dec = decompose(&schedule, instance)?;
    let class = classify(instance, params);
    Ok(build(instance, &dec, &class))
}

struct Plan {
    vertex: usize,
    case: ChargeCase,
    blue: Vec<Pair>,
}

pub(crate) fn build(
    instance: &Instance,
    dec: &DelayDecomposition,
    class: &ArcClass,
) -> ChargingReport {
    let params = class.params();
    let bounds = params.bounds();
    let mut violations = Vec::new();
    let mut invariant_log = Vec::new();

    // Blue arcs used so far, with the vertex that used each.
    let mut blue_user: BTreeMap<Pair, usize> = BTreeMap::new();
    let mut green_used: BTreeSet<Pair> = BTreeSet::new();
    let mut plans = Vec::with_capacity(class.v_r.len());

    for (step, &k) in class.v_r.iter().enumerate() {
        let tails = class.in_red(k);
        let o = tails.len();
        let prior = class.prior(k);
        let mut plan = Plan {
            vertex: k,
            case: ChargeCase::SingleRed,
            blue: Vec::new(),
        };
        if o >= 2 {
            green_used.extend(prior.iter().map(|&r| pair(r, k)));
            if 2 * prior.len() >= o - 1 {
                plan.case = ChargeCase::GreenOnly;
            } else {
                plan.case = ChargeCase::WithBlue;
                let need = (o - 1 - 2 * prior.len()).div_ceil(2);
                // Tails are already in V_I order, so this enumerates arcs by
                // earlier endpoint first.
                let mut free = Vec::new();
                for (x, &a) in tails.iter().enumerate() {
                    for &b in &tails[x + 1..] {
                        if !blue_user.contains_key(&pair(a, b)) {
                            free.push(pair(a, b));
                        }
                    }
                }
                if free.len() < need {
                    violations.push(format!(
                        "vertex {k}: needs {need} unused blue arcs but only {} remain",
                        free.len()
                    ));
                }
                plan.blue = free.into_iter().take(need).collect();
                for &e in &plan.blue {
                    blue_user.insert(e, k);
                }
            }
        }

        let processed = &class.v_r[..step];
        for (x, &j) in tails.iter().enumerate() {
            let upper: BTreeSet<usize> = tails[x..].iter().copied().collect();
            let mut members = vec![k];
            members.extend(processed.iter().copied().filter(|&r| class.is_red(j, r)));
            let used = blue_user
                .iter()
                .filter(|(&(a, b), user)| {
                    upper.contains(&a) && upper.contains(&b) && members.contains(user)
                })
                .count();
            let budget: usize = members.iter().map(|&r| class.in_red_from(r, j) - 1).sum();
            invariant_log.push(InvariantCheck {
                vertex: k,
                from: j,
                used,
                budget,
            });
            if used > budget {
                violations.push(format!(
                    "after vertex {k}: {used} blue arcs used among tails from {j} on, budget {budget}"
                ));
            }
        }
        plans.push(plan);
    }

    let split: BTreeSet<Pair> = blue_user
        .keys()
        .filter(|e| green_used.contains(e))
        .copied()
        .collect();
    let job = |j: usize| instance.job(j);
    // Special blue part gets min(p_i, p_j) of the optimal delay, the green
    // part the rest, and the algorithm's delay is split in proportion.
    let part = |e: Pair, blue_part: bool| -> (f64, f64) {
        let (alg, opt) = (dec.pair(e.0, e.1), dec.optimal_pair(e.0, e.1));
        if !split.contains(&e) {
            return (alg, opt);
        }
        let opt_b = job(e.0)
            .processing_time
            .min(job(e.1).processing_time)
            .min(opt);
        let alg_b = if opt > 0.0 { alg * opt_b / opt } else { 0.0 };
        if blue_part {
            (alg_b, opt_b)
        } else {
            (alg - alg_b, opt - opt_b)
        }
    };
    let le = |a: f64, b: f64| le_tol(a, b, REL_TOL);

    let mut vertices = Vec::with_capacity(plans.len());
    let mut charged_alg = 0.0;
    let mut charged_opt = 0.0;
    for plan in plans {
        let k = plan.vertex;
        let tk = job(k).test_time;
        let sigma = job(k).size();
        let tails = class.in_red(k).to_vec();
        let prior = class.prior(k).to_vec();

        let red = |j: usize| ChargedArc {
            role: ArcRole::Red,
            ends: pair(j, k),
            alg: dec.pair(j, k),
            opt: dec.optimal_pair(j, k),
        };
        let mut reds = tails.clone();
        reds.sort_unstable();
        let mut greens = prior.clone();
        greens.sort_unstable();
        let green_arcs: Vec<ChargedArc> = greens
            .iter()
            .map(|&r| {
                let e = pair(r, k);
                let (alg, opt) = part(e, false);
                let role = if split.contains(&e) {
                    ArcRole::SpecialGreen
                } else {
                    ArcRole::Green
                };
                ChargedArc {
                    role,
                    ends: e,
                    alg,
                    opt,
                }
            })
            .collect();
        let blue_arcs: Vec<ChargedArc> = plan
            .blue
            .iter()
            .map(|&e| {
                let (alg, opt) = part(e, true);
                let role = if split.contains(&e) {
                    ArcRole::SpecialBlue
                } else {
                    ArcRole::Blue
                };
                ChargedArc {
                    role,
                    ends: e,
                    alg,
                    opt,
                }
            })
            .collect();

        for a in green_arcs.iter().chain(&blue_arcs) {
            let (rho, floor, cap) = match a.role {
                ArcRole::Green => (
                    delay_ratio(a.alg, a.opt),
                    (params.nu() + params.nu().powi(2)) * tk,
                    bounds.green,
                ),
                ArcRole::SpecialGreen => {
                    (delay_ratio(a.alg, a.opt), params.nu() * tk, bounds.special)
                }
                ArcRole::Blue => (delay_ratio(a.alg, a.opt), tk, bounds.blue),
                ArcRole::SpecialBlue => (delay_ratio(a.alg, a.opt), tk, bounds.special),
                ArcRole::Red => unreachable!(),
            };
            if !le(floor, a.opt) || !le(a.alg, cap * a.opt) {
                violations.push(format!(
                    "vertex {k}: {:?} arc {:?} has D*={} (needs >= {floor}) and ratio {rho} (bound {cap})",
                    a.role, a.ends, a.opt
                ));
            }
        }

        let mut groups = Vec::new();
        let mut push = |kind: GroupKind, arcs: Vec<ChargedArc>, with_vertex: bool, bound: f64| {
            let own = if with_vertex { sigma } else { 0.0 };
            let alg = own + arcs.iter().map(|a| a.alg).sum::<f64>();
            let opt = own + arcs.iter().map(|a| a.opt).sum::<f64>();
            groups.push(ChargingGroup {
                kind,
                arcs,
                alg,
                opt,
                ratio: delay_ratio(alg, opt),
                bound,
            });
        };
        if reds.len() == 1 {
            push(
                GroupKind::SingleRed,
                vec![red(reds[0])],
                true,
                bounds.single_red(),
            );
        } else {
            push(
                GroupKind::VertexRed,
                vec![red(reds[0])],
                true,
                bounds.vertex_with_red(),
            );
            let mut partners = green_arcs.iter().chain(&blue_arcs);
            for chunk in reds[1..].chunks(2) {
                let mut arcs: Vec<ChargedArc> = chunk.iter().map(|&j| red(j)).collect();
                match partners.next() {
                    Some(p) => {
                        let (kind, bound) = match p.role {
                            ArcRole::Green => (GroupKind::RedsGreen, bounds.two_red_green()),
                            ArcRole::SpecialGreen => {
                                (GroupKind::RedsSpecialGreen, bounds.two_red_special_green())
                            }
                            _ => (GroupKind::RedsBlue, bounds.two_red_blue()),
                        };
                        arcs.push(*p);
                        push(kind, arcs, false, bound);
                    }
                    None => {
                        violations.push(format!(
                            "vertex {k}: red arcs {chunk:?} have no green or blue partner"
                        ));
                        push(GroupKind::RedsBlue, arcs, false, bounds.two_red_blue());
                    }
                }
            }
            for p in partners {
                let (kind, bound) = match p.role {
                    ArcRole::Green => (GroupKind::ExtraGreen, bounds.green),
                    ArcRole::SpecialGreen => (GroupKind::ExtraSpecialGreen, bounds.special),
                    _ => {
                        violations.push(format!(
                            "vertex {k}: blue arc {:?} left without red arcs",
                            p.ends
                        ));
                        (GroupKind::ExtraGreen, bounds.blue)
                    }
                };
                push(kind, vec![*p], false, bound);
            }
        }

        let alg: f64 = groups.iter().map(|g| g.alg).sum();
        let opt: f64 = groups.iter().map(|g| g.opt).sum();
        for g in &groups {
            if !le(g.alg, g.bound * g.opt) {
                violations.push(format!(
                    "vertex {k}: {:?} group has ratio {} above {}",
                    g.kind, g.ratio, g.bound
                ));
            }
        }
        let ratio = delay_ratio(alg, opt);
        if !le(alg, bounds.charging * opt) {
            violations.push(format!(
                "vertex {k}: C_k ratio {ratio} above {}",
                bounds.charging
            ));
        }
        charged_alg += alg;
        charged_opt += opt;
        vertices.push(VertexCharge {
            vertex: k,
            case: plan.case,
            red_tails: tails,
            prior,
            blue: plan.blue,
            groups,
            alg,
            opt,
            ratio,
        });
    }

    // Every arc part may be charged at most once.
    let mut seen: BTreeMap<(Pair, bool), usize> = BTreeMap::new();
    for a in vertices
        .iter()
        .flat_map(|v| v.groups.iter())
        .flat_map(|g| g.arcs.iter())
    {
        let blue_side = matches!(a.role, ArcRole::Blue | ArcRole::SpecialBlue);
        *seen.entry((a.ends, blue_side)).or_default() += 1;
    }
    for ((e, blue_side), count) in &seen {
        if *count > 1 {
            violations.push(format!(
                "arc {e:?} (blue part: {blue_side}) charged {count} times"
            ));
        }
    }
    let charged: BTreeSet<Pair> = seen.keys().map(|(e, _)| *e).collect();

    let n = instance.len();
    let mut rest_alg = 0.0;
    let mut rest_opt = 0.0;
    let mut leftover_vertices = 0;
    for j in 0..n {
        if class.vr_position(j).is_none() {
            leftover_vertices += 1;
            rest_alg += job(j).size();
            rest_opt += job(j).size();
        }
    }
    let mut leftover_arcs = 0;
    let mut leftover_worst_ratio: Option<f64> = None;
    for a in 0..n {
        for b in a + 1..n {
            if charged.contains(&(a, b)) {
                continue;
            }
            if class.pair_is_red(a, b) {
                violations.push(format!("red arc {a}-{b} is not charged to any vertex"));
            }
            leftover_arcs += 1;
            let (alg, opt) = (dec.pair(a, b), dec.optimal_pair(a, b));
            let rho = delay_ratio(alg, opt);
            leftover_worst_ratio = Some(leftover_worst_ratio.map_or(rho, |w| w.max(rho)));
            if !le(alg, bounds.non_red * opt) {
                violations.push(format!(
                    "uncharged arc {a}-{b} has ratio {rho} above {}",
                    bounds.non_red
                ));
            }
            rest_alg += alg;
            rest_opt += opt;
        }
    }

    let alg = dec.objective();
    let opt = dec.optimal_objective();
    if !rel_close(alg, rest_alg + charged_alg, REL_TOL)
        || !rel_close(opt, rest_opt + charged_opt, REL_TOL)
    {
        violations.push(format!(
            "accounting mismatch: ALG {alg} vs parts {}, OPT {opt} vs parts {}",
            rest_alg + charged_alg,
            rest_opt + charged_opt
        ));
    }
    let ratio = delay_ratio(alg, opt);
    if !le(alg, bounds.rho() * opt) {
        violations.push(format!("ALG/OPT = {ratio} above {}", bounds.rho()));
    }

    ChargingReport {
        params,
        bounds,
        vertices,
        invariant_log,
        split_arcs: split.into_iter().collect(),
        leftover_vertices,
        leftover_arcs,
        leftover_worst_ratio,
        alg,
        opt,
        ratio,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2(k: usize, eps: f64) -> Instance {
        Instance::from_pairs(
            std::iter::repeat_n((0.0, 1.0), k)
                .chain(std::iter::repeat_n((1.0 - eps, 1.0 + eps), k)),
        )
        .unwrap()
    }

    #[test]
    fn no_red_arcs() {
        let inst = Instance::from_pairs([(1.0, 1.2), (2.0, 1.5), (0.7, 0.9)]).unwrap();
        let r = charging(&inst, AnalysisParams::corollary()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.vertices.is_empty());
        assert_eq!(r.leftover_arcs, 3);
        assert!(r.ratio <= r.bounds.non_red);
    }

    #[test]
    fn single_red_arc() {
        let inst = Instance::from_pairs([(0.0, 10.0), (9.5, 10.5)]).unwrap();
        let r = charging(&inst, AnalysisParams::corollary()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.vertices.len(), 1);
        let v = &r.vertices[0];
        assert_eq!(v.case, ChargeCase::SingleRed);
        assert_eq!(v.groups.len(), 1);
        // (sigma_k + D) / (sigma_k + D*) = (20 + 19.5) / (20 + 10)
        assert!((v.ratio - 39.5 / 30.0).abs() < 1e-12);
        assert!(v.ratio <= r.bounds.single_red());
        assert_eq!(r.leftover_arcs, 0);
        assert_eq!(r.leftover_vertices, 1);
    }

    #[test]
    fn fig2_blue_then_green() {
        let k = 10;
        let r = charging(&fig2(k, 1e-6), AnalysisParams::corollary()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.vertices.len(), k);
        // First right job: no prior vertices, ceil(9/2) = 5 blue arcs.
        assert_eq!(r.vertices[0].case, ChargeCase::WithBlue);
        assert_eq!(
            r.vertices[0].blue,
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]
        );
        // Second: one prior vertex, z = 7, four blue arcs.
        assert_eq!(r.vertices[1].blue.len(), 4);
        // From the fifth on, 2|P| >= 9 and only green arcs are used.
        assert!(r.vertices[5..]
            .iter()
            .all(|v| v.case == ChargeCase::GreenOnly));
        assert!(r.split_arcs.is_empty());
        assert!(r.invariant_log.iter().all(|c| c.used <= c.budget));
    }

    #[test]
    fn fig2_large() {
        for k in [2, 50] {
            let r = charging(&fig2(k, 1e-6), AnalysisParams::corollary()).unwrap();
            assert!(r.passed(), "k={k}: {:?}", r.violations);
            assert!(r.vertices.iter().all(|v| v.ratio <= r.bounds.charging));
        }
    }

    #[test]
    fn accounting_adds_up() {
        let inst = fig2(6, 1e-3);
        let r = charging(&inst, AnalysisParams::corollary()).unwrap();
        let parts: f64 = r.vertices.iter().map(|v| v.alg).sum();
        assert!(parts < r.alg);
        assert!((r.ratio - r.alg / r.opt).abs() < 1e-15);
    }
}
