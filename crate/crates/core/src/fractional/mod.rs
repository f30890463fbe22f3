//! Greedy fractional colouring driven by a distribution on independent sets.
//!
//! [`greedy_fractional_colouring`] repeatedly asks a [`DistributionOracle`]
//! for a distribution on the independent sets of the still-uncoloured
//! induced subgraph, pours measure into each set in proportion to its
//! probability, and drops the vertices that reach measure one. With local
//! weights satisfying the oracle inequality at every step, vertex `v` only
//! ever receives colour from `[0, γ(v))`.

mod greedy;
mod oracle;
mod validate;
mod weights;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::hardcore::HardcoreError;
use crate::numerics::NumericsError;
use crate::scalar::{CompensatedSum, Scalar};

pub use greedy::{greedy_fractional_colouring, GreedyOptions, GreedyOutcome, IterationRecord};
pub use oracle::{DistributionOracle, HardCoreOracle, UniformOracle};
pub use validate::{
    extract_independent_set, validate_colouring, ValidationFailure, ValidationReport,
};
pub use weights::{alpha_for_beta, choose_local_weights, colour_bound, optimal_beta, weight_pair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FractionalError {
    #[error("weights need one row of r + 1 >= 1 coefficients per vertex")]
    BadWeights,
    #[error("epsilon must lie in (0, 4], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("iteration {iteration}: oracle bound at vertex {vertex} is {value} < 1")]
    HypothesisViolated {
        iteration: usize,
        vertex: Vertex,
        value: f64,
    },
    #[error("iteration {iteration}: oracle returned an invalid distribution: {reason}")]
    InvalidDistribution { iteration: usize, reason: String },
    #[error(
        "iteration {iteration}: vertex {vertex} used up its interval with measure {measure} < 1"
    )]
    BudgetExhausted {
        iteration: usize,
        vertex: Vertex,
        measure: f64,
    },
    #[error("no vertex saturated after {iterations} iterations on {n} vertices")]
    NonTermination { iterations: usize, n: usize },
    #[error("colouring is incomplete: vertex {vertex} has measure {measure}")]
    Incomplete { vertex: Vertex, measure: f64 },
    #[error("invalid colouring: {0}")]
    InvalidColouring(String),
    #[error(transparent)]
    Hardcore(#[from] HardcoreError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Per-vertex coefficients `(α_j(v))_{j=0..r}` and `γ(v) = Σ_j α_j(v) |N^j_G(v)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalWeights<S> {
    alpha: Vec<Vec<S>>,
    gamma: Vec<S>,
}

impl<S: Scalar> LocalWeights<S> {
    pub fn new(g: &Graph, alpha: Vec<Vec<S>>) -> Result<Self, FractionalError> {
        if alpha.len() != g.n() {
            return Err(FractionalError::BadWeights);
        }
        let r1 = alpha.first().map_or(1, Vec::len);
        if r1 == 0 || alpha.iter().any(|row| row.len() != r1) {
            return Err(FractionalError::BadWeights);
        }
        let gamma = (0..g.n())
            .map(|v| {
                let layers = g.distance_layers(v, r1 - 1)?;
                Ok(crate::scalar::sum(
                    alpha[v]
                        .iter()
                        .zip(&layers)
                        .map(|(a, layer)| a.clone() * S::from_count(layer.len())),
                ))
            })
            .collect::<Result<Vec<S>, GraphError>>()?;
        Ok(Self { alpha, gamma })
    }

    /// The same coefficient row for every vertex.
    pub fn uniform(g: &Graph, row: Vec<S>) -> Result<Self, FractionalError> {
        Self::new(g, vec![row; g.n()])
    }

    /// `r = 1` with `α_0(v) = alpha[v]`, `α_1(v) = beta[v]`.
    pub fn first_order(g: &Graph, alpha: Vec<S>, beta: Vec<S>) -> Result<Self, FractionalError> {
        if beta.len() != alpha.len() {
            return Err(FractionalError::BadWeights);
        }
        Self::new(
            g,
            alpha
                .into_iter()
                .zip(beta)
                .map(|(a, b)| vec![a, b])
                .collect(),
        )
    }

    /// Maximum distance `r`.
    pub fn r(&self) -> usize {
        self.alpha.first().map_or(0, |row| row.len() - 1)
    }

    pub fn alpha(&self, v: Vertex) -> &[S] {
        &self.alpha[v]
    }

    pub fn gamma(&self, v: Vertex) -> &S {
        &self.gamma[v]
    }

    pub fn gammas(&self) -> &[S] {
        &self.gamma
    }
}

/// Right-half-open interval `[start, end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<S> {
    pub start: S,
    pub end: S,
}

impl<S: Scalar> Interval<S> {
    pub fn length(&self) -> S {
        self.end.clone() - self.start.clone()
    }
}

/// Independent sets mapped to disjoint unions of half-open intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalColouring<S> {
    n: usize,
    parts: BTreeMap<VertexSet, Vec<Interval<S>>>,
    total: S,
}

impl<S: Scalar> FractionalColouring<S> {
    pub fn new(n: usize, parts: BTreeMap<VertexSet, Vec<Interval<S>>>, total: S) -> Self {
        Self { n, parts, total }
    }

    /// Number of vertices of the coloured graph.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `ŵ(G)`, the total measure used.
    pub fn total(&self) -> &S {
        &self.total
    }

    pub fn parts(&self) -> &BTreeMap<VertexSet, Vec<Interval<S>>> {
        &self.parts
    }

    /// `ŵ(I)`.
    pub fn measure(&self, set: &VertexSet) -> S {
        self.parts.get(set).map_or_else(S::zero, |ivs| {
            crate::scalar::sum(ivs.iter().map(Interval::length))
        })
    }

    /// `ŵ(v)` for every vertex.
    pub fn vertex_measures(&self) -> Vec<S> {
        let mut acc = vec![CompensatedSum::default(); self.n];
        for (set, ivs) in &self.parts {
            for iv in ivs {
                for v in set.iter().filter(|&v| v < self.n) {
                    acc[v].add(iv.length());
                }
            }
        }
        acc.iter().map(CompensatedSum::value).collect()
    }

    /// `w(v)` as a list of intervals sorted by start.
    pub fn vertex_intervals(&self, v: Vertex) -> Vec<Interval<S>> {
        let mut out: Vec<Interval<S>> = self
            .parts
            .iter()
            .filter(|(set, _)| set.contains(v))
            .flat_map(|(_, ivs)| ivs.iter().cloned())
            .collect();
        out.sort_by(|a, b| a.start.partial_cmp(&b.start).expect("comparable endpoints"));
        out
    }
}

/// JSON form: `{"total": x, "parts": [{"set": [...], "intervals": [[a, b], ...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ColouringDump {
    pub total: f64,
    pub parts: Vec<PartDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PartDump {
    pub set: Vec<Vertex>,
    /// Closed-open pairs `[start, end)`.
    pub intervals: Vec<[f64; 2]>,
}

impl<S: Scalar> From<&FractionalColouring<S>> for ColouringDump {
    fn from(col: &FractionalColouring<S>) -> Self {
        Self {
            total: col.total.to_f64(),
            parts: col
                .parts
                .iter()
                .map(|(set, ivs)| PartDump {
                    set: set.members().to_vec(),
                    intervals: ivs
                        .iter()
                        .map(|iv| [iv.start.to_f64(), iv.end.to_f64()])
                        .collect(),
                })
                .collect(),
        }
    }
}

impl ColouringDump {
    /// Rebuilds a colouring of a graph on `n` vertices.
    pub fn into_colouring(self, n: usize) -> FractionalColouring<f64> {
        let parts = self
            .parts
            .into_iter()
            .map(|p| {
                let ivs = p
                    .intervals
                    .iter()
                    .map(|&[start, end]| Interval { start, end })
                    .collect();
                (VertexSet::from(p.set), ivs)
            })
            .collect();
        FractionalColouring::new(n, parts, self.total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn gamma_counts_distance_layers() {
        let g = cycle(5);
        let w = LocalWeights::uniform(&g, vec![2.0, 1.0, 0.5]).unwrap();
        assert_eq!(w.r(), 2);
        // 2*1 + 1*2 + 0.5*2
        assert!(w.gammas().iter().all(|&x| x == 5.0));
        let s = LocalWeights::first_order(&star(3), vec![ratio(1, 1); 4], vec![ratio(1, 2); 4])
            .unwrap();
        assert_eq!(s.gamma(0), &ratio(5, 2));
        assert_eq!(s.gamma(1), &ratio(3, 2));
    }

    #[test]
    fn bad_weights() {
        let g = path(2);
        assert_eq!(
            LocalWeights::<f64>::new(&g, vec![vec![1.0]]),
            Err(FractionalError::BadWeights)
        );
        assert_eq!(
            LocalWeights::<f64>::new(&g, vec![vec![1.0], vec![1.0, 2.0]]),
            Err(FractionalError::BadWeights)
        );
        assert_eq!(
            LocalWeights::<f64>::new(&g, vec![vec![], vec![]]),
            Err(FractionalError::BadWeights)
        );
    }

    #[test]
    fn measures_and_dump() {
        let mut parts = BTreeMap::new();
        parts.insert(
            VertexSet::from([0]),
            vec![Interval {
                start: ratio(0, 1),
                end: ratio(1, 2),
            }],
        );
        parts.insert(
            VertexSet::from([1]),
            vec![Interval {
                start: ratio(1, 2),
                end: ratio(3, 2),
            }],
        );
        let col: FractionalColouring<Rational> = FractionalColouring::new(2, parts, ratio(3, 2));
        assert_eq!(col.vertex_measures(), vec![ratio(1, 2), ratio(1, 1)]);
        assert_eq!(col.measure(&VertexSet::empty()), ratio(0, 1));
        let dump = ColouringDump::from(&col);
        let json = serde_json::to_string(&dump).unwrap();
        assert_eq!(
            json,
            r#"{"total":1.5,"parts":[{"set":[0],"intervals":[[0.0,0.5]]},{"set":[1],"intervals":[[0.5,1.5]]}]}"#
        );
        let back = dump.into_colouring(2);
        assert_eq!(back.vertex_measures(), vec![0.5, 1.0]);
    }
}
