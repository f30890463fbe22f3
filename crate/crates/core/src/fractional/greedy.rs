use std::collections::BTreeMap;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::hardcore::SetDistribution;
use crate::scalar::{CompensatedSum, Scalar};

use super::{DistributionOracle, FractionalColouring, FractionalError, Interval, LocalWeights};

#[derive(Clone, Copy, Debug)]
pub struct GreedyOptions {
    /// Slack allowed in the per-iteration oracle inequality `Σ_j α_j E|N^j ∩ I| >= 1`.
    pub hypothesis_tol: f64,
    /// A vertex is saturated once `ŵ(v) >= 1 - saturation_tol`.
    pub saturation_tol: f64,
    /// A vertex whose interval `[0, γ(v))` is used up must have `ŵ(v) >= 1 - equality_tol`.
    pub equality_tol: f64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            hypothesis_tol: 1e-9,
            saturation_tol: 1e-9,
            equality_tol: 1e-7,
        }
    }
}

/// One pass of the main loop.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord<S> {
    /// `|V(H)|` at the start of the iteration.
    pub active: usize,
    pub tau: S,
    /// `Pr(v ∈ I_H)` indexed by parent vertex (zero outside `H`).
    pub occupancy: Vec<S>,
    /// Vertices dropped at the end of the iteration.
    pub removed: Vec<Vertex>,
    /// Subset of `removed` whose interval bound `γ(v)` was reached.
    pub budget_reached: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub struct GreedyOutcome<S> {
    pub colouring: FractionalColouring<S>,
    pub trace: Vec<IterationRecord<S>>,
    /// Final `ŵ(v)`.
    pub vertex_measure: Vec<S>,
}

fn check_distribution<S: Scalar>(
    h: &Graph,
    dist: &SetDistribution<S>,
    iteration: usize,
    tol: &S,
) -> Result<(), FractionalError> {
    let bad = |reason: String| FractionalError::InvalidDistribution { iteration, reason };
    for (set, p) in &dist.entries {
        if set.iter().any(|v| v >= h.n()) || !h.is_independent(set) {
            return Err(bad(format!(
                "{set} is not an independent set of the subgraph"
            )));
        }
        if *p < S::zero() {
            return Err(bad(format!("negative probability for {set}")));
        }
    }
    let mass = dist.total_mass();
    if mass.abs_diff(&S::one()) > tol.clone() {
        return Err(bad(format!("total mass {}", mass.to_f64())));
    }
    Ok(())
}

/// Runs the greedy fractional colouring algorithm.
///
/// Each iteration takes
/// `τ = min( min_v (1 − ŵ(v)) / Pr(v ∈ I_H), min_v γ(v) − ŵ(G) )`
/// over the vertices `v` of the current subgraph `H`, slices
/// `[ŵ(G), ŵ(G) + τ)` into consecutive blocks of length `Pr(I_H = I) τ`
/// (non-empty sets in lexicographic order, the empty set last), and removes
/// every vertex that reached measure one.
pub fn greedy_fractional_colouring<S, O>(
    g: &Graph,
    weights: &LocalWeights<S>,
    oracle: &O,
    options: GreedyOptions,
) -> Result<GreedyOutcome<S>, FractionalError>
where
    S: Scalar,
    O: DistributionOracle<S> + ?Sized,
{
    let n = g.n();
    if weights.gammas().len() != n {
        return Err(FractionalError::BadWeights);
    }
    let hyp_tol = S::tolerance(options.hypothesis_tol);
    let sat_tol = S::tolerance(options.saturation_tol);
    let eq_tol = S::tolerance(options.equality_tol);
    let one = S::one();

    let mut measure = vec![CompensatedSum::<S>::default(); n];
    let mut alive = vec![true; n];
    let mut used = S::zero();
    let mut parts: BTreeMap<VertexSet, Vec<Interval<S>>> = BTreeMap::new();
    let mut trace = Vec::new();

    while alive.iter().any(|&a| a) {
        let iteration = trace.len();
        if iteration >= n {
            return Err(FractionalError::NonTermination {
                iterations: iteration,
                n,
            });
        }
        let keep: VertexSet = (0..n).filter(|&v| alive[v]).collect();
        let h = g.induced_subgraph(&keep)?;
        let dist = oracle.distribution(&h)?;
        check_distribution(&h.graph, &dist, iteration, &S::tolerance(1e-9))?;
        let p = dist.marginals(h.graph.n());

        // oracle inequality, distances measured inside H
        for (local, &v) in h.to_parent.iter().enumerate() {
            let layers = h.graph.distance_layers(local, weights.r())?;
            let value =
                crate::scalar::sum(weights.alpha(v).iter().zip(&layers).map(|(a, layer)| {
                    a.clone() * crate::scalar::sum(layer.iter().map(|u| p[u].clone()))
                }));
            if value < one.clone() - hyp_tol.clone() {
                return Err(FractionalError::HypothesisViolated {
                    iteration,
                    vertex: v,
                    value: value.to_f64(),
                });
            }
        }

        let mut tau: Option<S> = None;
        for (local, &v) in h.to_parent.iter().enumerate() {
            if p[local] > S::zero() {
                let t = (one.clone() - measure[v].value()) / p[local].clone();
                tau = Some(tau.map_or(t.clone(), |x| x.min_of(t)));
            }
            let t = weights.gamma(v).clone() - used.clone();
            tau = Some(tau.map_or(t.clone(), |x| x.min_of(t)));
        }
        let tau = tau.expect("H is non-empty").max_of(S::zero());

        let mut blocks: Vec<&(VertexSet, S)> =
            dist.entries.iter().filter(|(s, _)| !s.is_empty()).collect();
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        blocks.extend(dist.entries.iter().filter(|(s, _)| s.is_empty()));
        for (set, prob) in blocks {
            let len = prob.clone() * tau.clone();
            if len <= S::zero() {
                continue;
            }
            let start = used.clone();
            used = used + len;
            let ivs = parts.entry(h.lift(set)).or_default();
            match ivs.last_mut() {
                Some(last) if last.end == start => last.end = used.clone(),
                _ => ivs.push(Interval {
                    start,
                    end: used.clone(),
                }),
            }
        }

        let mut occupancy = vec![S::zero(); n];
        for (local, &v) in h.to_parent.iter().enumerate() {
            measure[v].add(p[local].clone() * tau.clone());
            occupancy[v] = p[local].clone();
        }

        let mut removed = Vec::new();
        let mut budget_reached = Vec::new();
        for &v in &h.to_parent {
            let m = measure[v].value();
            let exhausted = weights.gamma(v).clone() - used.clone() <= sat_tol.clone();
            if exhausted {
                if m < one.clone() - eq_tol.clone() {
                    return Err(FractionalError::BudgetExhausted {
                        iteration,
                        vertex: v,
                        measure: m.to_f64(),
                    });
                }
                budget_reached.push(v);
            }
            if exhausted || m >= one.clone() - sat_tol.clone() {
                alive[v] = false;
                removed.push(v);
            }
        }
        if removed.is_empty() {
            return Err(FractionalError::NonTermination {
                iterations: iteration + 1,
                n,
            });
        }
        trace.push(IterationRecord {
            active: h.graph.n(),
            tau,
            occupancy,
            removed,
            budget_reached,
        });
    }

    let vertex_measure = measure.iter().map(CompensatedSum::value).collect();
    Ok(GreedyOutcome {
        colouring: FractionalColouring::new(n, parts, used),
        trace,
        vertex_measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::{HardCoreOracle, UniformOracle};
    use crate::graph::generators::*;
    use crate::hardcore::Fugacity;
    use crate::scalar::{ratio, Rational};

    fn iv(a: Rational, b: Rational) -> Interval<Rational> {
        Interval { start: a, end: b }
    }

    // Hand simulation: K1, Pr(v ∈ I) = 1/2, α_0 = 2, so γ = 2 and τ = min(1/(1/2), 2 - 0) = 2.
    #[test]
    fn k1_trace() {
        let g = Graph::empty(1);
        let w = LocalWeights::uniform(&g, vec![ratio(2, 1)]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(ratio(1, 1)).unwrap());
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].tau, ratio(2, 1));
        assert_eq!(out.vertex_measure, vec![ratio(1, 1)]);
        assert_eq!(out.colouring.total(), &ratio(2, 1));
        assert_eq!(
            out.colouring.vertex_intervals(0),
            vec![iv(ratio(0, 1), ratio(1, 1))]
        );
        assert_eq!(out.colouring.measure(&VertexSet::empty()), ratio(1, 1));
    }

    // Hand simulation: K2 at λ = 1 gives ∅, {0}, {1} probability 1/3 each; α_0 = 3 so τ = 3.
    #[test]
    fn k2_trace() {
        let g = path(2);
        let w = LocalWeights::uniform(&g, vec![ratio(3, 1), ratio(0, 1)]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(ratio(1, 1)).unwrap());
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].tau, ratio(3, 1));
        for set in [
            VertexSet::empty(),
            VertexSet::from([0]),
            VertexSet::from([1]),
        ] {
            assert_eq!(out.colouring.measure(&set), ratio(1, 1));
        }
        assert_eq!(out.colouring.total(), &ratio(3, 1));
        assert_eq!(out.vertex_measure, vec![ratio(1, 1); 2]);
        assert_eq!(
            out.colouring.vertex_intervals(0),
            vec![iv(ratio(0, 1), ratio(1, 1))]
        );
        assert_eq!(
            out.colouring.vertex_intervals(1),
            vec![iv(ratio(1, 1), ratio(2, 1))]
        );
    }

    // Hand simulation: five maximum independent sets of C5 uniformly, Pr(v ∈ I) = 2/5, α_0 = 5/2.
    #[test]
    fn c5_trace() {
        let g = cycle(5);
        let w = LocalWeights::uniform(&g, vec![ratio(5, 2), ratio(0, 1)]).unwrap();
        let oracle = UniformOracle {
            sets: vec![
                [0, 2].into(),
                [0, 3].into(),
                [1, 3].into(),
                [1, 4].into(),
                [2, 4].into(),
            ],
        };
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].tau, ratio(5, 2));
        assert_eq!(out.colouring.total(), &ratio(5, 2));
        assert_eq!(out.colouring.parts().len(), 5);
        for set in oracle.sets.iter() {
            assert_eq!(out.colouring.measure(set), ratio(1, 2));
        }
        assert_eq!(out.vertex_measure, vec![ratio(1, 1); 5]);
    }

    #[test]
    fn c5_trace_in_floats() {
        let g = cycle(5);
        let w = LocalWeights::<f64>::uniform(&g, vec![2.5, 0.0]).unwrap();
        let oracle = UniformOracle {
            sets: vec![
                [0, 2].into(),
                [0, 3].into(),
                [1, 3].into(),
                [1, 4].into(),
                [2, 4].into(),
            ],
        };
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert!((out.trace[0].tau - 2.5).abs() < 1e-12);
        assert!((out.colouring.total() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn weak_weights_violate_hypothesis() {
        let g = path(2);
        let w = LocalWeights::uniform(&g, vec![2.0, 0.0]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(1.0).unwrap());
        let err =
            greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            FractionalError::HypothesisViolated {
                iteration: 0,
                vertex: 0,
                ..
            }
        ));
    }

    #[test]
    fn invalid_oracle_output_is_rejected() {
        let g = path(2);
        let w = LocalWeights::uniform(&g, vec![1.0, 0.0]).unwrap();
        let dependent = |_: &crate::graph::InducedSubgraph| {
            Ok(SetDistribution {
                entries: vec![(VertexSet::from([0, 1]), 1.0)],
            })
        };
        let err =
            greedy_fractional_colouring(&g, &w, &dependent, GreedyOptions::default()).unwrap_err();
        assert!(matches!(err, FractionalError::InvalidDistribution { .. }));
        let light = |_: &crate::graph::InducedSubgraph| {
            Ok(SetDistribution {
                entries: vec![(VertexSet::from([0]), 0.5)],
            })
        };
        let err =
            greedy_fractional_colouring(&g, &w, &light, GreedyOptions::default()).unwrap_err();
        assert!(matches!(err, FractionalError::InvalidDistribution { .. }));
    }

    #[test]
    fn multi_iteration_accounting() {
        // star with hard-core oracle: leaves and centre saturate at different times
        let g = star(4);
        let w = LocalWeights::uniform(&g, vec![ratio(4, 1), ratio(1, 1)]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(ratio(1, 1)).unwrap());
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert!(out.trace.len() >= 2);
        let total: Rational = out.trace.iter().map(|r| r.tau.clone()).sum();
        assert_eq!(&total, out.colouring.total());
        for v in 0..g.n() {
            let acc: Rational = out
                .trace
                .iter()
                .map(|r| r.occupancy[v].clone() * r.tau.clone())
                .sum();
            assert_eq!(acc, out.vertex_measure[v]);
            assert_eq!(out.vertex_measure[v], ratio(1, 1));
        }
        assert_eq!(out.colouring.vertex_measures(), out.vertex_measure);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::empty(0);
        let w = LocalWeights::<f64>::new(&g, vec![]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(1.0).unwrap());
        let out = greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default()).unwrap();
        assert_eq!(*out.colouring.total(), 0.0);
        assert!(out.colouring.parts().is_empty());
    }
}
