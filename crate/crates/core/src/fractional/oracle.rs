use std::collections::BTreeMap;

use crate::graph::{InducedSubgraph, VertexSet};
use crate::hardcore::{hard_core_distribution, ExactConfig, Fugacity, SetDistribution};
use crate::scalar::Scalar;

use super::FractionalError;

/// Supplies a probability distribution on the independent sets of an induced
/// subgraph. Sets are expressed in the subgraph's local vertex ids.
///
/// Closures `Fn(&InducedSubgraph) -> Result<SetDistribution<S>, FractionalError>`
/// are oracles, which covers user-supplied tables.
pub trait DistributionOracle<S> {
    fn distribution(&self, h: &InducedSubgraph) -> Result<SetDistribution<S>, FractionalError>;
}

impl<S, F> DistributionOracle<S> for F
where
    F: Fn(&InducedSubgraph) -> Result<SetDistribution<S>, FractionalError>,
{
    fn distribution(&self, h: &InducedSubgraph) -> Result<SetDistribution<S>, FractionalError> {
        self(h)
    }
}

/// The hard-core model at a fixed fugacity, by exact enumeration.
#[derive(Clone, Debug)]
pub struct HardCoreOracle<S> {
    pub lambda: Fugacity<S>,
    pub config: ExactConfig,
}

impl<S: Scalar> HardCoreOracle<S> {
    pub fn new(lambda: Fugacity<S>) -> Self {
        Self {
            lambda,
            config: ExactConfig::default(),
        }
    }
}

impl<S: Scalar> DistributionOracle<S> for HardCoreOracle<S> {
    fn distribution(&self, h: &InducedSubgraph) -> Result<SetDistribution<S>, FractionalError> {
        Ok(hard_core_distribution(&h.graph, &self.lambda, self.config)?)
    }
}

/// Uniform over a fixed list of independent sets of the parent graph,
/// each restricted to the current subgraph.
#[derive(Clone, Debug)]
pub struct UniformOracle {
    pub sets: Vec<VertexSet>,
}

impl<S: Scalar> DistributionOracle<S> for UniformOracle {
    fn distribution(&self, h: &InducedSubgraph) -> Result<SetDistribution<S>, FractionalError> {
        let mut counts: BTreeMap<VertexSet, usize> = BTreeMap::new();
        for set in &self.sets {
            let local: VertexSet = set.iter().filter_map(|v| h.local(v)).collect();
            *counts.entry(local).or_default() += 1;
        }
        let k = S::from_count(self.sets.len());
        Ok(SetDistribution {
            entries: counts
                .into_iter()
                .map(|(set, c)| (set, S::from_count(c) / k.clone()))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::cycle;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn uniform_restricts_to_subgraph() {
        let g = cycle(5);
        let oracle = UniformOracle {
            sets: vec![VertexSet::from([0, 2]), VertexSet::from([1, 3])],
        };
        let h = g.induced_subgraph(&VertexSet::from([1, 2, 3])).unwrap();
        let d: SetDistribution<Rational> = oracle.distribution(&h).unwrap();
        // {0,2} -> {2} -> local {1}; {1,3} -> local {0,2}
        assert_eq!(
            d.entries,
            vec![
                (VertexSet::from([0, 2]), ratio(1, 2)),
                (VertexSet::from([1]), ratio(1, 2))
            ]
        );
    }

    #[test]
    fn closures_are_oracles() {
        let oracle = |_: &InducedSubgraph| {
            Ok(SetDistribution {
                entries: vec![(VertexSet::empty(), 1.0)],
            })
        };
        let h = InducedSubgraph::whole(&cycle(3));
        assert_eq!(oracle.distribution(&h).unwrap().entries.len(), 1);
    }
}
