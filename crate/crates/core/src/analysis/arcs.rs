use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::job::Instance;

use super::params::AnalysisParams;

/// Unordered job pair stored as `(smaller id, larger id)`.
pub type Pair = (usize, usize);

pub fn pair(a: usize, b: usize) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The analysis graph of an instance: arc directions, red arcs, and the
/// vertex orders and neighbourhoods built on top of them.
#[derive(Debug, Clone)]
pub struct ArcClass {
    n: usize,
    params: AnalysisParams,
    sizes: Vec<f64>,
    imbalanced: Vec<bool>,
    red: Vec<bool>,
    /// Imbalanced jobs ordered by `max(t, p)`, then id.
    pub v_i: Vec<usize>,
    /// Jobs with an incoming red arc ordered by test time, then id.
    pub v_r: Vec<usize>,
    vi_pos: Vec<Option<usize>>,
    vr_pos: Vec<Option<usize>>,
    in_red: Vec<Vec<usize>>,
    prior: Vec<Vec<usize>>,
    blue_roles: BTreeSet<Pair>,
    green_roles: BTreeSet<Pair>,
}

/// Whether the ordered pair `(j, k)` satisfies the red-arc conditions,
/// regardless of the arc's direction.
pub fn red_conditions(instance: &Instance, params: AnalysisParams, j: usize, k: usize) -> bool {
    let (jj, kk) = (instance.job(j), instance.job(k));
    let m = jj.longer_part();
    is_imbalanced(m, jj.shorter_part(), params.mu())
        && m >= kk.test_time
        && kk.test_time >= params.nu() * m
        && kk.processing_time >= params.nu() * kk.test_time
}

fn is_imbalanced(longer: f64, shorter: f64, mu: f64) -> bool {
    longer >= mu * shorter
}

pub fn classify(instance: &Instance, params: AnalysisParams) -> ArcClass {
    let n = instance.len();
    let sizes = instance.sizes();
    let imbalanced: Vec<bool> = instance
        .jobs()
        .iter()
        .map(|j| is_imbalanced(j.longer_part(), j.shorter_part(), params.mu()))
        .collect();
    let mut red = vec![false; n * n];
    for j in 0..n {
        for k in 0..n {
            if j != k && points_to(&sizes, j, k) && red_conditions(instance, params, j, k) {
                red[j * n + k] = true;
            }
        }
    }

    let mut v_i: Vec<usize> = (0..n).filter(|&j| imbalanced[j]).collect();
    v_i.sort_by(|&a, &b| {
        let (ma, mb) = (instance.job(a).longer_part(), instance.job(b).longer_part());
        ma.total_cmp(&mb).then(a.cmp(&b))
    });
    let mut v_r: Vec<usize> = (0..n).filter(|&k| (0..n).any(|j| red[j * n + k])).collect();
    v_r.sort_by(|&a, &b| {
        let (ta, tb) = (instance.job(a).test_time, instance.job(b).test_time);
        ta.total_cmp(&tb).then(a.cmp(&b))
    });
    let mut vi_pos = vec![None; n];
    for (i, &j) in v_i.iter().enumerate() {
        vi_pos[j] = Some(i);
    }
    let mut vr_pos = vec![None; n];
    for (i, &k) in v_r.iter().enumerate() {
        vr_pos[k] = Some(i);
    }

    let mut in_red = vec![Vec::new(); n];
    for &k in &v_r {
        in_red[k] = v_i.iter().copied().filter(|&j| red[j * n + k]).collect();
    }
    let mut prior = vec![Vec::new(); n];
    for (pos, &k) in v_r.iter().enumerate() {
        prior[k] = v_r[..pos]
            .iter()
            .copied()
            .filter(|&r| in_red[k].iter().any(|&j| red[j * n + r]))
            .collect();
    }

    let mut blue_roles = BTreeSet::new();
    let mut green_roles = BTreeSet::new();
    for &k in &v_r {
        let tails = &in_red[k];
        for (a, &x) in tails.iter().enumerate() {
            for &y in &tails[a + 1..] {
                blue_roles.insert(pair(x, y));
            }
        }
        for &r in &prior[k] {
            green_roles.insert(pair(r, k));
        }
    }

    ArcClass {
        n,
        params,
        sizes,
        imbalanced,
        red,
        v_i,
        v_r,
        vi_pos,
        vr_pos,
        in_red,
        prior,
        blue_roles,
        green_roles,
    }
}

/// Arcs point from the smaller to the larger size, equal sizes by id.
fn points_to(sizes: &[f64], j: usize, k: usize) -> bool {
    sizes[j].total_cmp(&sizes[k]).then(j.cmp(&k)) == Ordering::Less
}

impl ArcClass {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn params(&self) -> AnalysisParams {
        self.params
    }

    /// Tail of the arc between `a` and `b`.
    pub fn tail(&self, a: usize, b: usize) -> usize {
        if points_to(&self.sizes, a, b) {
            a
        } else {
            b
        }
    }

    pub fn is_imbalanced(&self, j: usize) -> bool {
        self.imbalanced[j]
    }

    /// Whether the arc `j -> k` exists and is red.
    pub fn is_red(&self, j: usize, k: usize) -> bool {
        j != k && self.red[j * self.n + k]
    }

    /// Whether the arc between `a` and `b`, in whichever direction, is red.
    pub fn pair_is_red(&self, a: usize, b: usize) -> bool {
        self.is_red(a, b) || self.is_red(b, a)
    }

    pub fn red_count(&self) -> usize {
        self.red.iter().filter(|&&r| r).count()
    }

    pub fn vi_position(&self, j: usize) -> Option<usize> {
        self.vi_pos[j]
    }

    pub fn vr_position(&self, k: usize) -> Option<usize> {
        self.vr_pos[k]
    }

    /// Tails of red arcs into `k`, in `V_I` order.
    pub fn in_red(&self, k: usize) -> &[usize] {
        &self.in_red[k]
    }

    /// Vertices before `k` in `V_R` that share a red tail with `k`.
    pub fn prior(&self, k: usize) -> &[usize] {
        &self.prior[k]
    }

    /// Size of `N^-_{>=j}(r)`: red tails of `r` at or after `j` in `V_I`.
    pub fn in_red_from(&self, r: usize, j: usize) -> usize {
        let from = self.vi_pos[j].unwrap_or(usize::MAX);
        self.in_red[r]
            .iter()
            .filter(|&&x| self.vi_pos[x].is_some_and(|p| p >= from))
            .count()
    }

    /// Pairs that are blue for at least one vertex of `V_R`.
    pub fn blue_roles(&self) -> &BTreeSet<Pair> {
        &self.blue_roles
    }

    /// Pairs that are green for at least one vertex of `V_R`.
    pub fn green_roles(&self) -> &BTreeSet<Pair> {
        &self.green_roles
    }

    /// Pairs that can act both as a blue and as a green arc.
    pub fn dual_roles(&self) -> impl Iterator<Item = Pair> + '_ {
        self.blue_roles.intersection(&self.green_roles).copied()
    }
}
