use std::collections::BTreeMap;
use std::fmt;

use crate::graph::Vertex;
use crate::scalar::CompensatedSum;

use super::{ColourNode, Cover, DpError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisFailure {
    /// `ℓ(u) < 3`.
    EllTooSmall { vertex: Vertex, ell: usize },
    /// `|L(u)| < ℓ(u)`.
    ListTooShort {
        vertex: Vertex,
        len: usize,
        ell: usize,
    },
    /// `8 deg*(c) > min_{v ∈ N(u)} ℓ(v)` for a node `c` of `L(u)`.
    StarDegree {
        vertex: Vertex,
        node: ColourNode,
        star_degree: usize,
        min_neighbour_ell: usize,
    },
}

impl fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EllTooSmall { vertex, ell } => write!(f, "ell({vertex}) = {ell} < 3"),
            Self::ListTooShort { vertex, len, ell } => {
                write!(f, "|L({vertex})| = {len} < ell = {ell}")
            }
            Self::StarDegree {
                vertex,
                node,
                star_degree,
                min_neighbour_ell,
            } => write!(
                f,
                "node {node} of L({vertex}) has deg* {star_degree} > {min_neighbour_ell}/8"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub failures: Vec<HypothesisFailure>,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failures.split_first() {
            None => write!(f, "pass"),
            Some((first, rest)) => {
                write!(f, "{first}")?;
                if !rest.is_empty() {
                    write!(f, " (and {} more)", rest.len())?;
                }
                Ok(())
            }
        }
    }
}

fn check_len(c: &Cover, ell: &[usize]) -> Result<(), DpError> {
    if ell.len() != c.base().n() {
        return Err(DpError::LengthMismatch {
            expected: c.base().n(),
            found: ell.len(),
        });
    }
    Ok(())
}

/// Checks `ℓ(u) >= 3`, `|L(u)| >= ℓ(u)` and `8 deg*(c) <= min_{v ∈ N(u)} ℓ(v)`
/// for every `c ∈ L(u)`. The last condition is vacuous for isolated `u`.
pub fn finishing_blow_hypothesis(c: &Cover, ell: &[usize]) -> Result<HypothesisReport, DpError> {
    check_len(c, ell)?;
    let g = c.base();
    let mut failures = Vec::new();
    for u in 0..g.n() {
        if ell[u] < 3 {
            failures.push(HypothesisFailure::EllTooSmall {
                vertex: u,
                ell: ell[u],
            });
        }
        if c.list(u).len() < ell[u] {
            failures.push(HypothesisFailure::ListTooShort {
                vertex: u,
                len: c.list(u).len(),
                ell: ell[u],
            });
        }
        let Some(limit) = g.neighbours(u).iter().map(|&v| ell[v]).min() else {
            continue;
        };
        for &node in c.list(u) {
            let d = c.star_degree(node);
            if 8 * d > limit {
                failures.push(HypothesisFailure::StarDegree {
                    vertex: u,
                    node,
                    star_degree: d,
                    min_neighbour_ell: limit,
                });
            }
        }
    }
    Ok(HypothesisReport { failures })
}

/// Numerical check of the local lemma with `x_{c1c2} = 3 / (ℓ(u1) ℓ(u2))`
/// on the cover truncated to `ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LllCertificate {
    pub cross_edges: usize,
    pub max_x: f64,
    /// `min_e x_e exp(−1.4 Σ_{Γ(e)} x) − Pr(B_e)`.
    pub min_slack: f64,
    /// `min_e x_e Π_{Γ(e)} (1 − x) − Pr(B_e)`.
    pub min_product_slack: f64,
    /// Edge attaining `min_slack`.
    pub worst_edge: Option<(ColourNode, ColourNode)>,
}

impl LllCertificate {
    /// Sufficient exponential form holds and every `x < 0.5`.
    pub fn certified(&self) -> bool {
        self.min_slack >= 0.0 && self.max_x < 0.5
    }

    /// The plain product form holds and every `x < 1`.
    pub fn product_certified(&self) -> bool {
        self.min_product_slack >= 0.0 && self.max_x < 1.0
    }
}

/// Evaluates both forms of the local lemma hypothesis without checking the
/// finishing-blow hypothesis first.
///
/// `Γ(c1c2)` is every cross edge with an end in `L(u1) ∪ L(u2)`, the edge
/// itself included, each counted once.
pub fn lll_evaluate(c: &Cover, ell: &[usize]) -> Result<LllCertificate, DpError> {
    check_len(c, ell)?;
    for u in 0..c.base().n() {
        if c.list(u).len() < ell[u] || ell[u] == 0 {
            return Err(DpError::ListTooShort {
                vertex: u,
                len: c.list(u).len(),
                ell: ell[u],
            });
        }
    }
    let keep = c.prefix_mask(ell);
    let edges: Vec<(ColourNode, ColourNode)> = c
        .cross_edges()
        .iter()
        .copied()
        .filter(|&(a, b)| keep[a] && keep[b])
        .collect();
    let owner_pair = |a: ColourNode, b: ColourNode| {
        let (u, v) = (c.owner(a), c.owner(b));
        (u.min(v), u.max(v))
    };
    let x_of = |a: ColourNode, b: ColourNode| {
        let (u, v) = owner_pair(a, b);
        3.0 / (ell[u] as f64 * ell[v] as f64)
    };

    // per-vertex and per-vertex-pair sums of x and log(1 − x)
    let n = c.base().n();
    let mut at_vertex = vec![
        (
            CompensatedSum::<f64>::default(),
            CompensatedSum::<f64>::default()
        );
        n
    ];
    let mut at_pair: BTreeMap<(Vertex, Vertex), (CompensatedSum<f64>, CompensatedSum<f64>)> =
        BTreeMap::new();
    for &(a, b) in &edges {
        let x = x_of(a, b);
        let l = (-x).ln_1p();
        let (u, v) = owner_pair(a, b);
        for w in [u, v] {
            at_vertex[w].0.add(x);
            at_vertex[w].1.add(l);
        }
        let p = at_pair.entry((u, v)).or_default();
        p.0.add(x);
        p.1.add(l);
    }

    let mut cert = LllCertificate {
        cross_edges: edges.len(),
        max_x: 0.0,
        min_slack: f64::INFINITY,
        min_product_slack: f64::INFINITY,
        worst_edge: None,
    };
    for &(a, b) in &edges {
        let (u, v) = owner_pair(a, b);
        let x = x_of(a, b);
        let p = 1.0 / (ell[u] as f64 * ell[v] as f64);
        let shared = &at_pair[&(u, v)];
        let sum_x = at_vertex[u].0.value() + at_vertex[v].0.value() - shared.0.value();
        let sum_log = at_vertex[u].1.value() + at_vertex[v].1.value() - shared.1.value();
        let slack = x * (-1.4 * sum_x).exp() - p;
        let product_slack = x * sum_log.exp() - p;
        cert.max_x = cert.max_x.max(x);
        if slack < cert.min_slack {
            cert.min_slack = slack;
            cert.worst_edge = Some((a, b));
        }
        cert.min_product_slack = cert.min_product_slack.min(product_slack);
    }
    Ok(cert)
}

/// [`lll_evaluate`] behind the finishing-blow hypothesis.
pub fn lll_certify(c: &Cover, ell: &[usize]) -> Result<LllCertificate, DpError> {
    let report = finishing_blow_hypothesis(c, ell)?;
    if !report.passes() {
        return Err(DpError::Hypothesis(report));
    }
    lll_evaluate(c, ell)
}
