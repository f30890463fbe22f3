use crate::graph::{Graph, VertexSet};
use crate::scalar::{CompensatedSum, Scalar};

use super::{ExactConfig, Fugacity, HardcoreError, OccupancyStats};

/// Depth down to which the branch-and-bound splits into `rayon::join` tasks.
///
/// The split structure is fixed, so results do not depend on thread count.
const PAR_DEPTH: usize = 4;

type Mask = u128;

fn masks(g: &Graph) -> Vec<Mask> {
    (0..g.n())
        .map(|v| g.neighbours(v).iter().fold(0, |m, &w| m | 1 << w))
        .collect()
}

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Visits every independent set in lexicographic order of its sorted member
/// list (so `∅` first, then `{0}`, `{0, 2}`, ...).
pub fn for_each_independent_set(g: &Graph, mut visit: impl FnMut(&[usize])) {
    fn go(
        adj: &[Vec<usize>],
        next: usize,
        blocked: &mut [u32],
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        visit(current);
        for v in next..adj.len() {
            if blocked[v] == 0 {
                current.push(v);
                for &w in &adj[v] {
                    blocked[w] += 1;
                }
                go(adj, v + 1, blocked, current, visit);
                for &w in &adj[v] {
                    blocked[w] -= 1;
                }
                current.pop();
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbours(v).to_vec()).collect();
    let mut blocked = vec![0u32; g.n()];
    go(&adj, 0, &mut blocked, &mut Vec::new(), &mut visit);
}

/// All independent sets in canonical (lexicographic) order.
pub fn independent_sets(g: &Graph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for_each_independent_set(g, |s| {
        out.push(VertexSet::from_sorted_unchecked(s.to_vec()))
    });
    out
}

/// An explicit probability distribution on independent sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SetDistribution<S> {
    /// `(set, probability)` pairs, sets distinct.
    pub entries: Vec<(VertexSet, S)>,
}

impl<S: Scalar> SetDistribution<S> {
    /// Marginals `Pr(v ∈ I)` for `v in 0..n`.
    pub fn marginals(&self, n: usize) -> Vec<S> {
        let mut acc = vec![CompensatedSum::default(); n];
        for (set, p) in &self.entries {
            for v in set.iter() {
                acc[v].add(p.clone());
            }
        }
        acc.iter().map(CompensatedSum::value).collect()
    }

    pub fn total_mass(&self) -> S {
        crate::scalar::sum(self.entries.iter().map(|(_, p)| p.clone()))
    }
}

/// The hard-core distribution as an explicit table, sets in canonical order.
pub fn hard_core_distribution<S: Scalar>(
    g: &Graph,
    lambda: &Fugacity<S>,
    config: ExactConfig,
) -> Result<SetDistribution<S>, HardcoreError> {
    config.check(g)?;
    let lam = lambda.value();
    let powers: Vec<S> = (0..=g.n()).map(|k| lam.powu(k)).collect();
    let mut weights = Vec::new();
    let mut z = CompensatedSum::default();
    for_each_independent_set(g, |s| {
        let w = powers[s.len()].clone();
        z.add(w.clone());
        weights.push((VertexSet::from_sorted_unchecked(s.to_vec()), w));
    });
    let z = z.value();
    let entries = weights
        .into_iter()
        .map(|(s, w)| (s, w / z.clone()))
        .collect();
    Ok(SetDistribution { entries })
}

struct Acc<S> {
    z: CompensatedSum<S>,
    occ: Vec<CompensatedSum<S>>,
}

impl<S: Scalar> Acc<S> {
    fn new(n: usize) -> Self {
        Self {
            z: CompensatedSum::default(),
            occ: vec![CompensatedSum::default(); n],
        }
    }

    fn merge(&mut self, other: Acc<S>) {
        self.z.add(other.z.value());
        for (a, b) in self.occ.iter_mut().zip(other.occ) {
            a.add(b.value());
        }
    }
}

struct Ctx<'a, S> {
    adj: &'a [Mask],
    lambda: S,
    /// `(1 + λ)^k`
    pow1: Vec<S>,
}

impl<S: Scalar> Ctx<'_, S> {
    /// Sums over independent sets `chosen ∪ J`, `J ⊆ rem`, with weight `w λ^|J|`.
    fn run(&self, rem: Mask, chosen: Mask, w: S, depth: usize, acc: &mut Acc<S>) {
        // branch on the highest-degree remaining vertex
        let mut best: Option<(u32, usize)> = None;
        for v in bits(rem) {
            let d = (self.adj[v] & rem).count_ones();
            if d > 0 && best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, v));
            }
        }
        let Some((_, v)) = best else {
            // rem is edgeless: closed form
            let k = rem.count_ones() as usize;
            let leaf = w.clone() * self.pow1[k].clone();
            acc.z.add(leaf.clone());
            for u in bits(chosen) {
                acc.occ[u].add(leaf.clone());
            }
            if k > 0 {
                let each = w * self.lambda.clone() * self.pow1[k - 1].clone();
                for u in bits(rem) {
                    acc.occ[u].add(each.clone());
                }
            }
            return;
        };
        let out_rem = rem & !(1 << v);
        let in_rem = rem & !(1 << v) & !self.adj[v];
        let in_w = w.clone() * self.lambda.clone();
        if depth < PAR_DEPTH {
            let mut right = Acc::new(acc.occ.len());
            rayon::join(
                || self.run(out_rem, chosen, w, depth + 1, acc),
                || self.run(in_rem, chosen | 1 << v, in_w, depth + 1, &mut right),
            );
            acc.merge(right);
        } else {
            self.run(out_rem, chosen, w, depth + 1, acc);
            self.run(in_rem, chosen | 1 << v, in_w, depth + 1, acc);
        }
    }
}

/// Exact hard-core statistics by branch-and-bound over independent sets.
///
/// Branches on the inclusion of the highest-degree remaining vertex and
/// closes edgeless remainders in closed form.
pub fn enumerate_stats<S: Scalar>(
    g: &Graph,
    lambda: &Fugacity<S>,
    max_distance: usize,
    config: ExactConfig,
) -> Result<OccupancyStats<S>, HardcoreError> {
    config.check(g)?;
    if max_distance == 0 {
        return Err(HardcoreError::BadDistance);
    }
    let n = g.n();
    let lam = lambda.value().clone();
    let one_plus = S::one() + lam.clone();
    let ctx = Ctx {
        adj: &masks(g),
        lambda: lam.clone(),
        pow1: (0..=n).map(|k| one_plus.powu(k)).collect(),
    };
    let all: Mask = if n == 0 { 0 } else { Mask::MAX >> (128 - n) };
    let mut acc = Acc::new(n);
    ctx.run(all, 0, S::one(), 0, &mut acc);
    let z = acc.z.value();
    let occupancy = acc.occ.iter().map(|o| o.value() / z.clone()).collect();
    OccupancyStats::from_marginals(g, lam, z, occupancy, max_distance)
}
