//! The hard-core model: random independent sets with `Pr(I) ∝ λ^|I|`.
//!
//! Exact statistics come from enumeration (see [`enumerate_stats`]); larger
//! graphs fall back to single-site Glauber dynamics. The module also holds
//! the per-vertex occupancy lower bound used to choose colouring weights.

mod enumerate;
mod facts;
mod glauber;

use std::collections::BTreeMap;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::scalar::Scalar;

pub use enumerate::{
    enumerate_stats, for_each_independent_set, hard_core_distribution, independent_sets,
    SetDistribution,
};
pub use facts::{conditional_fact_check, FactReport};
pub use glauber::{estimate_occupancy, glauber_sample, GlauberChain, OccupancyEstimate};

/// Default vertex cutoff for exact enumeration.
pub const DEFAULT_CUTOFF: usize = 30;

/// Hard limit imposed by the 128-bit vertex masks used in enumeration.
pub const MAX_CUTOFF: usize = 128;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardcoreError {
    #[error("fugacity must be positive")]
    NonPositiveFugacity,
    #[error("graph has {n} vertices, above the exact-enumeration cutoff {cutoff}; use the Glauber sampler")]
    TooLarge { n: usize, cutoff: usize },
    #[error("max_distance must be at least 1")]
    BadDistance,
    #[error("graph contains the triangle {0:?}")]
    NotTriangleFree((Vertex, Vertex, Vertex)),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Fugacity `λ > 0`.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Fugacity<S>(S);

impl<S: Scalar> Fugacity<S> {
    pub fn new(lambda: S) -> Result<Self, HardcoreError> {
        if lambda > S::zero() {
            Ok(Self(lambda))
        } else {
            Err(HardcoreError::NonPositiveFugacity)
        }
    }

    pub fn value(&self) -> &S {
        &self.0
    }

    /// `λ / (1 + λ)`, the occupation probability of an uncovered vertex.
    pub fn uncovered_occupation(&self) -> S {
        self.0.clone() / (S::one() + self.0.clone())
    }
}

/// Exact-mode configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactConfig {
    pub cutoff: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

impl ExactConfig {
    pub fn check(&self, g: &Graph) -> Result<(), HardcoreError> {
        let cutoff = self.cutoff.min(MAX_CUTOFF);
        if g.n() > cutoff {
            Err(HardcoreError::TooLarge { n: g.n(), cutoff })
        } else {
            Ok(())
        }
    }
}

/// Per-vertex hard-core statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyStats<S> {
    pub lambda: S,
    /// `Z_G(λ)`.
    pub partition: S,
    pub log_partition: f64,
    /// `Pr(v ∈ I)`.
    pub occupancy: Vec<S>,
    /// `neighbour_occupancy[j - 1][v] = E|N^j(v) ∩ I|` for `j = 1..=max_distance`.
    pub neighbour_occupancy: Vec<Vec<S>>,
}

impl<S: Scalar> OccupancyStats<S> {
    /// Assembles stats from marginals; distance sums use breadth-first layers of `g`.
    pub(crate) fn from_marginals(
        g: &Graph,
        lambda: S,
        partition: S,
        occupancy: Vec<S>,
        max_distance: usize,
    ) -> Result<Self, HardcoreError> {
        let neighbour_occupancy = neighbour_sums(g, &occupancy, max_distance)?;
        Ok(Self {
            lambda,
            log_partition: partition.to_f64().ln(),
            partition,
            occupancy,
            neighbour_occupancy,
        })
    }

    /// `E|N^j(v) ∩ I|`; `j = 0` gives `Pr(v ∈ I)`.
    pub fn neighbour_occupancy(&self, v: Vertex, j: usize) -> &S {
        if j == 0 {
            &self.occupancy[v]
        } else {
            &self.neighbour_occupancy[j - 1][v]
        }
    }

    pub fn max_distance(&self) -> usize {
        self.neighbour_occupancy.len()
    }

    /// `E|I|`.
    pub fn expected_size(&self) -> S {
        crate::scalar::sum(self.occupancy.iter().cloned())
    }
}

/// `sums[j - 1][v] = Σ_{u ∈ N^j(v)} marginal(u)`.
pub(crate) fn neighbour_sums<S: Scalar>(
    g: &Graph,
    marginal: &[S],
    max_distance: usize,
) -> Result<Vec<Vec<S>>, HardcoreError> {
    if max_distance == 0 {
        return Err(HardcoreError::BadDistance);
    }
    let mut sums = vec![vec![S::zero(); g.n()]; max_distance];
    for v in 0..g.n() {
        let layers = g.distance_layers(v, max_distance)?;
        for (j, layer) in layers.iter().enumerate().skip(1) {
            sums[j - 1][v] = crate::scalar::sum(layer.iter().map(|u| marginal[u].clone()));
        }
    }
    Ok(sums)
}

/// Serialised form: `{"lambda", "log_Z", "occupancy", "neighbour_occupancy": {"1": [...], ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StatsReport {
    pub lambda: f64,
    #[serde(rename = "log_Z")]
    pub log_z: Option<f64>,
    pub occupancy: Vec<f64>,
    pub neighbour_occupancy: BTreeMap<String, Vec<f64>>,
}

impl<S: Scalar> From<&OccupancyStats<S>> for StatsReport {
    fn from(stats: &OccupancyStats<S>) -> Self {
        Self {
            lambda: stats.lambda.to_f64(),
            log_z: Some(stats.log_partition),
            occupancy: stats.occupancy.iter().map(Scalar::to_f64).collect(),
            neighbour_occupancy: stats
                .neighbour_occupancy
                .iter()
                .enumerate()
                .map(|(j, row)| {
                    (
                        (j + 1).to_string(),
                        row.iter().map(Scalar::to_f64).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// Lower bound on `α Pr(v ∈ I) + β E|N(v) ∩ I|` for triangle-free graphs:
///
/// `β λ (log(α/β) + log log(1+λ) + 1) / ((1+λ) log(1+λ))`.
///
/// Not clamped: very small `α/β` gives a negative (vacuous) value.
pub fn hcm_lower_bound<T: Float>(lambda: T, alpha: T, beta: T) -> T {
    let one = T::one();
    let l1 = lambda.ln_1p();
    beta * lambda * ((alpha / beta).ln() + l1.ln() + one) / ((one + lambda) * l1)
}
