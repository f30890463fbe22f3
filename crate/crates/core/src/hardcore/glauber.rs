use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexSet};

/// Single-site heat-bath dynamics for the hard-core model.
///
/// Each step picks a uniform vertex; if none of its neighbours is occupied
/// it becomes occupied with probability `λ/(1+λ)`, otherwise it is vacated.
#[derive(Clone, Debug)]
pub struct GlauberChain<'g> {
    graph: &'g Graph,
    p_occupy: f64,
    occupied: Vec<bool>,
    rng: ChaCha8Rng,
}

impl<'g> GlauberChain<'g> {
    /// Starts from the empty set. `lambda` must be positive.
    pub fn new(graph: &'g Graph, lambda: f64, seed: u64) -> Self {
        assert!(lambda > 0.0, "fugacity must be positive");
        Self {
            graph,
            p_occupy: lambda / (1.0 + lambda),
            occupied: vec![false; graph.n()],
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn step(&mut self) {
        let n = self.graph.n();
        if n == 0 {
            return;
        }
        let v = self.rng.random_range(0..n);
        let free = self.graph.neighbours(v).iter().all(|&u| !self.occupied[u]);
        let coin = self.rng.random_bool(self.p_occupy);
        self.occupied[v] = free && coin;
        debug_assert!(self
            .graph
            .neighbours(v)
            .iter()
            .all(|&u| !(self.occupied[u] && self.occupied[v])));
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.occupied[v]
    }

    pub fn state(&self) -> VertexSet {
        (0..self.graph.n()).filter(|&v| self.occupied[v]).collect()
    }
}

/// Runs `steps` heat-bath updates from the empty set and returns the final set.
pub fn glauber_sample(g: &Graph, lambda: f64, steps: u64, seed: u64) -> VertexSet {
    let mut chain = GlauberChain::new(g, lambda, seed);
    chain.run(steps);
    chain.state()
}

/// Time-averaged occupancy with batch-means standard errors.
#[derive(Clone, Debug)]
pub struct OccupancyEstimate {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
}

/// Estimates `Pr(v ∈ I)` by averaging the chain state over `steps` updates
/// after `burn_in`, split into `batches` equal batches.
pub fn estimate_occupancy(
    g: &Graph,
    lambda: f64,
    burn_in: u64,
    steps: u64,
    batches: usize,
    seed: u64,
) -> OccupancyEstimate {
    let n = g.n();
    let batches = batches.max(2);
    let per_batch = (steps / batches as u64).max(1);
    let mut chain = GlauberChain::new(g, lambda, seed);
    chain.run(burn_in);
    let mut batch_means = vec![vec![0.0; n]; batches];
    for row in batch_means.iter_mut() {
        let mut counts = vec![0u64; n];
        for _ in 0..per_batch {
            chain.step();
            for (v, c) in counts.iter_mut().enumerate() {
                *c += chain.occupied[v] as u64;
            }
        }
        for v in 0..n {
            row[v] = counts[v] as f64 / per_batch as f64;
        }
    }
    let b = batches as f64;
    let mean: Vec<f64> = (0..n)
        .map(|v| batch_means.iter().map(|r| r[v]).sum::<f64>() / b)
        .collect();
    let std_err = (0..n)
        .map(|v| {
            let var = batch_means
                .iter()
                .map(|r| (r[v] - mean[v]).powi(2))
                .sum::<f64>()
                / (b - 1.0);
            (var / b).sqrt()
        })
        .collect();
    OccupancyEstimate { mean, std_err }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn deterministic_and_independent() {
        let g = petersen();
        let a = glauber_sample(&g, 1.0, 5_000, 42);
        assert_eq!(a, glauber_sample(&g, 1.0, 5_000, 42));
        assert!(g.is_independent(&a));
    }

    #[test]
    fn edgeless_graph_matches_product_measure() {
        let g = Graph::empty(4);
        let est = estimate_occupancy(&g, 9.0, 1_000, 400_000, 40, 7);
        for v in 0..4 {
            assert!((est.mean[v] - 0.9).abs() <= 3.0 * est.std_err[v] + 1e-3);
        }
    }

    #[test]
    fn k2_matches_exact_occupancy() {
        let est = estimate_occupancy(&path(2), 1.0, 1_000, 1_000_000, 50, 11);
        for v in 0..2 {
            assert!(
                (est.mean[v] - 1.0 / 3.0).abs() <= 3.0 * est.std_err[v],
                "{est:?}"
            );
        }
    }

    #[test]
    fn c5_matches_exact_occupancy() {
        let est = estimate_occupancy(&cycle(5), 1.0, 1_000, 1_000_000, 50, 5);
        for v in 0..5 {
            assert!(
                (est.mean[v] - 3.0 / 11.0).abs() <= 3.0 * est.std_err[v],
                "{est:?}"
            );
        }
    }
}
