use std::fmt;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::scalar::Scalar;

use super::{FractionalColouring, FractionalError, Interval};

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum ValidationFailure {
    /// A keyed set is not independent or mentions a vertex outside the graph.
    BadSet(VertexSet),
    /// An interval with `end <= start`.
    EmptyInterval {
        set: VertexSet,
        start: f64,
        end: f64,
    },
    /// The intervals do not tile `[0, total)`: overlap or gap at `at`.
    Tiling {
        at: f64,
    },
    Undercoloured {
        vertex: Vertex,
        measure: f64,
    },
    AdjacentOverlap {
        u: Vertex,
        v: Vertex,
    },
    BoundExceeded {
        vertex: Vertex,
        end: f64,
        bound: f64,
    },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadSet(s) => write!(f, "{s} is not an independent set"),
            Self::EmptyInterval { set, start, end } => {
                write!(f, "{set} has empty interval [{start}, {end})")
            }
            Self::Tiling { at } => write!(f, "intervals do not tile [0, total) near {at}"),
            Self::Undercoloured { vertex, measure } => {
                write!(f, "vertex {vertex} has measure {measure} < 1")
            }
            Self::AdjacentOverlap { u, v } => {
                write!(f, "adjacent vertices {u} and {v} share colour")
            }
            Self::BoundExceeded { vertex, end, bound } => {
                write!(f, "vertex {vertex} is coloured up to {end} > {bound}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
    /// `ŵ(v)`.
    pub measure: Vec<f64>,
    /// `bound(v) − sup w(v)`; negative means the bound is violated.
    pub slack: Vec<f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn worst_slack(&self) -> Option<f64> {
        self.slack.iter().copied().reduce(f64::min)
    }
}

fn overlap<S: Scalar>(a: &[Interval<S>], b: &[Interval<S>], tol: &S) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].start.clone().max_of(b[j].start.clone());
        let hi = a[i].end.clone().min_of(b[j].end.clone());
        if hi - lo > tol.clone() {
            return true;
        }
        if a[i].end < b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    false
}

/// Checks every structural property of `col` and `w(v) ⊆ [0, bound(v))`,
/// with absolute tolerance `1e-9` for floats and none for exact scalars.
pub fn validate_colouring<S: Scalar>(
    g: &Graph,
    col: &FractionalColouring<S>,
    bound: &[S],
) -> ValidationReport {
    let tol = S::tolerance(TOL);
    let mut failures = Vec::new();
    let n = g.n();

    let mut all: Vec<&Interval<S>> = Vec::new();
    for (set, ivs) in col.parts() {
        if set.iter().any(|v| v >= n) || !g.is_independent(set) {
            failures.push(ValidationFailure::BadSet(set.clone()));
        }
        for iv in ivs {
            if iv.end <= iv.start {
                failures.push(ValidationFailure::EmptyInterval {
                    set: set.clone(),
                    start: iv.start.to_f64(),
                    end: iv.end.to_f64(),
                });
            }
            all.push(iv);
        }
    }
    all.sort_by(|a, b| a.start.partial_cmp(&b.start).expect("comparable endpoints"));
    let mut cursor = S::zero();
    for iv in &all {
        if iv.start.abs_diff(&cursor) > tol {
            failures.push(ValidationFailure::Tiling {
                at: cursor.to_f64(),
            });
        }
        cursor = iv.end.clone();
    }
    if cursor.abs_diff(col.total()) > tol {
        failures.push(ValidationFailure::Tiling {
            at: cursor.to_f64(),
        });
    }

    let measure = col.vertex_measures();
    let intervals: Vec<Vec<Interval<S>>> = (0..n).map(|v| col.vertex_intervals(v)).collect();
    let mut slack = Vec::with_capacity(n);
    for v in 0..n {
        if measure[v] < S::one() - tol.clone() {
            failures.push(ValidationFailure::Undercoloured {
                vertex: v,
                measure: measure[v].to_f64(),
            });
        }
        let end = intervals[v]
            .iter()
            .map(|iv| iv.end.clone())
            .reduce(S::max_of)
            .unwrap_or_else(S::zero);
        let b = bound.get(v).cloned().unwrap_or_else(S::zero);
        if !intervals[v].is_empty() && end > b.clone() + tol.clone() {
            failures.push(ValidationFailure::BoundExceeded {
                vertex: v,
                end: end.to_f64(),
                bound: b.to_f64(),
            });
        }
        slack.push((b - end).to_f64());
    }
    for (u, v) in g.edges() {
        if overlap(&intervals[u], &intervals[v], &tol) {
            failures.push(ValidationFailure::AdjacentOverlap { u, v });
        }
    }
    ValidationReport {
        failures,
        measure: measure.iter().map(Scalar::to_f64).collect(),
        slack,
    }
}

/// The largest colour class `{v : t ∈ w(v)}` over one sample point `t` per
/// elementary interval; earliest `t` wins ties. At least `⌈n / ŵ(G)⌉` for a
/// complete colouring.
pub fn extract_independent_set<S: Scalar>(
    g: &Graph,
    col: &FractionalColouring<S>,
) -> Result<VertexSet, FractionalError> {
    let tol = S::tolerance(TOL);
    let measure = col.vertex_measures();
    for v in 0..g.n() {
        if measure.get(v).is_none_or(|m| *m < S::one() - tol.clone()) {
            return Err(FractionalError::Incomplete {
                vertex: v,
                measure: measure.get(v).map_or(0.0, Scalar::to_f64),
            });
        }
    }
    // sweep over endpoints; ends sort before starts at equal points
    let mut events: Vec<(S, bool, &VertexSet)> = col
        .parts()
        .iter()
        .flat_map(|(set, ivs)| {
            ivs.iter()
                .filter(|iv| iv.start < iv.end)
                .flat_map(move |iv| [(iv.start.clone(), true, set), (iv.end.clone(), false, set)])
        })
        .collect();
    events.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("comparable endpoints")
            .then(a.1.cmp(&b.1))
    });
    let mut cover = vec![0usize; g.n()];
    let mut covered = 0;
    let mut best = VertexSet::empty();
    let mut i = 0;
    while i < events.len() {
        let mut j = i;
        while j < events.len() && events[j].0 == events[i].0 {
            let (_, start, set) = &events[j];
            for v in set.iter() {
                if *start {
                    cover[v] += 1;
                    covered += usize::from(cover[v] == 1);
                } else {
                    cover[v] -= 1;
                    covered -= usize::from(cover[v] == 0);
                }
            }
            j += 1;
        }
        // the class is constant on [events[i].0, events[j].0)
        if j < events.len() && covered > best.len() {
            best = (0..g.n()).filter(|&v| cover[v] > 0).collect();
        }
        i = j;
    }
    if !g.is_independent(&best) {
        return Err(FractionalError::InvalidColouring(format!(
            "colour class {best} is not independent"
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::{
        greedy_fractional_colouring, GreedyOptions, HardCoreOracle, LocalWeights, UniformOracle,
    };
    use crate::graph::generators::*;
    use crate::hardcore::Fugacity;
    use crate::scalar::{ratio, Rational};
    use std::collections::BTreeMap;

    fn c5_colouring() -> FractionalColouring<f64> {
        let g = cycle(5);
        let w = LocalWeights::uniform(&g, vec![2.5, 0.0]).unwrap();
        let oracle = UniformOracle {
            sets: vec![
                [0, 2].into(),
                [0, 3].into(),
                [1, 3].into(),
                [1, 4].into(),
                [2, 4].into(),
            ],
        };
        greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default())
            .unwrap()
            .colouring
    }

    fn k2_colouring() -> FractionalColouring<Rational> {
        let g = path(2);
        let w = LocalWeights::uniform(&g, vec![ratio(3, 1), ratio(0, 1)]).unwrap();
        let oracle = HardCoreOracle::new(Fugacity::new(ratio(1, 1)).unwrap());
        greedy_fractional_colouring(&g, &w, &oracle, GreedyOptions::default())
            .unwrap()
            .colouring
    }

    #[test]
    fn c5_passes_its_bound() {
        let col = c5_colouring();
        let report = validate_colouring(&cycle(5), &col, &[2.5 + 1e-9; 5]);
        assert!(report.is_valid(), "{:?}", report.failures);
        assert!(report.worst_slack().unwrap() >= 0.0);
        assert_eq!(extract_independent_set(&cycle(5), &col).unwrap().len(), 2);
    }

    #[test]
    fn k2_passes_exactly() {
        let col = k2_colouring();
        let report = validate_colouring(&path(2), &col, &[ratio(3, 1), ratio(3, 1)]);
        assert!(report.is_valid(), "{:?}", report.failures);
        assert_eq!(extract_independent_set(&path(2), &col).unwrap().len(), 1);
        // tight bound: vertex 1 ends at 2
        let tight = validate_colouring(&path(2), &col, &[ratio(1, 1), ratio(2, 1)]);
        assert!(tight.is_valid());
        assert_eq!(tight.slack, vec![0.0, 0.0]);
    }

    #[test]
    fn zero_bound_fails_everywhere() {
        let col = c5_colouring();
        let report = validate_colouring(&cycle(5), &col, &[0.0; 5]);
        let exceeded: Vec<Vertex> = report
            .failures
            .iter()
            .filter_map(|f| match f {
                ValidationFailure::BoundExceeded { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect();
        assert_eq!(exceeded, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn edgeless_graph_single_class() {
        let g = Graph::empty(4);
        let mut parts = BTreeMap::new();
        parts.insert(
            VertexSet::from([0, 1, 2, 3]),
            vec![Interval {
                start: 0.0,
                end: 1.0,
            }],
        );
        let col = FractionalColouring::new(4, parts, 1.0);
        assert!(validate_colouring(&g, &col, &[1.0; 4]).is_valid());
        assert_eq!(
            extract_independent_set(&g, &col).unwrap(),
            VertexSet::from([0, 1, 2, 3])
        );
    }

    #[test]
    fn structural_failures_are_reported() {
        let g = path(3);
        let mut parts = BTreeMap::new();
        parts.insert(
            VertexSet::from([0, 1]),
            vec![Interval {
                start: 0.0,
                end: 1.0,
            }],
        );
        parts.insert(
            VertexSet::from([2]),
            vec![Interval {
                start: 0.5,
                end: 1.5,
            }],
        );
        let col = FractionalColouring::new(3, parts, 2.0);
        let report = validate_colouring(&g, &col, &[10.0; 3]);
        assert!(report
            .failures
            .contains(&ValidationFailure::BadSet(VertexSet::from([0, 1]))));
        assert!(report
            .failures
            .contains(&ValidationFailure::AdjacentOverlap { u: 0, v: 1 }));
        assert!(
            report
                .failures
                .iter()
                .filter(|f| matches!(f, ValidationFailure::Tiling { .. }))
                .count()
                == 2
        );
    }

    #[test]
    fn incomplete_colouring_is_rejected() {
        let g = path(2);
        let mut parts = BTreeMap::new();
        parts.insert(
            VertexSet::from([0]),
            vec![Interval {
                start: 0.0,
                end: 1.0,
            }],
        );
        let col = FractionalColouring::new(2, parts, 1.0);
        assert!(matches!(
            extract_independent_set(&g, &col),
            Err(FractionalError::Incomplete { vertex: 1, .. })
        ));
        assert!(!validate_colouring(&g, &col, &[1.0; 2]).is_valid());
    }
}
