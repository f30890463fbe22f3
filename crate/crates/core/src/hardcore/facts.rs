use crate::graph::Graph;
use crate::scalar::{CompensatedSum, Scalar};

use super::{for_each_independent_set, ExactConfig, Fugacity, HardcoreError};

/// Maximum residuals of the two conditional identities of the hard-core model
/// on a triangle-free graph, over all vertices (and all feasible `j`).
#[derive(Clone, Debug, PartialEq)]
pub struct FactReport<S> {
    /// `max_v |Pr(v ∈ I | v uncovered) − λ/(1+λ)|`
    pub fact1_residual: S,
    /// `max_{v,j} |Pr(v uncovered | j uncovered neighbours) − (1+λ)^{−j}|`
    pub fact2_residual: S,
}

/// Checks both identities exactly by enumeration.
pub fn conditional_fact_check<S: Scalar>(
    g: &Graph,
    lambda: &Fugacity<S>,
    config: ExactConfig,
) -> Result<FactReport<S>, HardcoreError> {
    if let Some(t) = g.find_triangle() {
        return Err(HardcoreError::NotTriangleFree(t));
    }
    config.check(g)?;
    let n = g.n();
    let lam = lambda.value().clone();
    let powers: Vec<S> = (0..=n).map(|k| lam.powu(k)).collect();
    let max_deg = g.max_degree();

    let mut uncovered = vec![CompensatedSum::<S>::default(); n];
    let mut occupied = vec![CompensatedSum::<S>::default(); n];
    // by_j[v][j] = (Pr(j uncovered nbrs), Pr(v uncovered and j uncovered nbrs))
    let mut by_j = vec![
        vec![
            (
                CompensatedSum::<S>::default(),
                CompensatedSum::<S>::default()
            );
            max_deg + 1
        ];
        n
    ];
    let mut in_set = vec![false; n];
    let mut covered = vec![false; n];

    for_each_independent_set(g, |set| {
        let w = powers[set.len()].clone();
        for &v in set {
            in_set[v] = true;
        }
        for u in 0..n {
            covered[u] = g.neighbours(u).iter().any(|&x| in_set[x]);
        }
        for v in 0..n {
            let j = g.neighbours(v).iter().filter(|&&u| !covered[u]).count();
            by_j[v][j].0.add(w.clone());
            if !covered[v] {
                uncovered[v].add(w.clone());
                by_j[v][j].1.add(w.clone());
                if in_set[v] {
                    occupied[v].add(w.clone());
                }
            }
        }
        for &v in set {
            in_set[v] = false;
        }
    });

    let target1 = lambda.uncovered_occupation();
    let inv = S::one() / (S::one() + lam);
    let mut fact1 = S::zero();
    let mut fact2 = S::zero();
    for v in 0..n {
        // every vertex is uncovered by the empty set, so the denominator is positive
        let p1 = occupied[v].value() / uncovered[v].value();
        fact1 = fact1.max_of(p1.abs_diff(&target1));
        for (j, (all, unc)) in by_j[v].iter().enumerate() {
            let all = all.value();
            if all > S::zero() {
                let p2 = unc.value() / all;
                fact2 = fact2.max_of(p2.abs_diff(&inv.powu(j)));
            }
        }
    }
    Ok(FactReport {
        fact1_residual: fact1,
        fact2_residual: fact2,
    })
}
