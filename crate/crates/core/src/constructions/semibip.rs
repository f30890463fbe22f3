use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, VertexSet};
use crate::hardcore::{
    enumerate_stats, hard_core_distribution, ExactConfig, Fugacity, GlauberChain,
};
use crate::scalar::{CompensatedSum, Scalar};

use super::ConstructionError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaMode {
    Fixed(f64),
    /// `λ = n / Σ_v log deg(v)` over non-isolated `v`.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Exact sampling up to the cutoff, Glauber dynamics above it.
    Auto,
    Exact,
    /// Glauber dynamics for the given number of single-site updates per trial.
    Glauber {
        steps: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiBipartiteOptions {
    pub lambda: LambdaMode,
    pub trials: usize,
    pub seed: u64,
    pub sample: SampleMode,
    pub config: ExactConfig,
}

impl Default for SemiBipartiteOptions {
    fn default() -> Self {
        Self {
            lambda: LambdaMode::Auto,
            trials: 64,
            seed: 0,
            sample: SampleMode::Auto,
            config: ExactConfig::default(),
        }
    }
}

/// An independent set `A`, its complement `B`, and the edges between them.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiBipartite {
    pub a: VertexSet,
    pub b: VertexSet,
    /// `e_G(A, B) = Σ_{v ∈ A} deg(v)`.
    pub cut_edges: usize,
    /// `2 e_G(A, B) / n`.
    pub avg_degree: f64,
    pub lambda: f64,
    pub exact: bool,
}

/// `n / Σ_v log deg(v)`, summing over non-isolated vertices.
pub fn auto_lambda(g: &Graph) -> Result<f64, ConstructionError> {
    let s: f64 = (0..g.n())
        .filter(|&v| g.degree(v) > 0)
        .map(|v| (g.degree(v) as f64).ln())
        .collect::<CompensatedSum<f64>>()
        .value();
    if s > 0.0 {
        Ok(g.n() as f64 / s)
    } else {
        Err(ConstructionError::Degenerate)
    }
}

/// `E X` for `X = Σ_{v ∈ I} deg(v)`, counted per vertex and per neighbourhood.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedCut<S> {
    /// `Σ_v deg(v) Pr(v ∈ I)`.
    pub by_degree: S,
    /// `Σ_v E|N(v) ∩ I|`.
    pub by_neighbourhood: S,
}

pub fn expected_cut<S: Scalar>(
    g: &Graph,
    lambda: &Fugacity<S>,
    config: ExactConfig,
) -> Result<ExpectedCut<S>, ConstructionError> {
    let stats = enumerate_stats(g, lambda, 1, config)?;
    Ok(ExpectedCut {
        by_degree: crate::scalar::sum(
            (0..g.n()).map(|v| S::from_count(g.degree(v)) * stats.occupancy[v].clone()),
        ),
        by_neighbourhood: crate::scalar::sum(
            (0..g.n()).map(|v| stats.neighbour_occupancy(v, 1).clone()),
        ),
    })
}

/// `n λ (m + log(α/β) + log log(1+λ) + 1) / ((1 + α/β)(1+λ) log(1+λ))`
/// with `m` the mean of `log deg(v)`. Needs every degree positive.
pub fn semi_bipartite_lower_bound(
    g: &Graph,
    lambda: f64,
    ratio: f64,
) -> Result<f64, ConstructionError> {
    if g.n() == 0 || g.min_degree() == 0 {
        return Err(ConstructionError::Degenerate);
    }
    let n = g.n() as f64;
    let mean_log: f64 = (0..g.n())
        .map(|v| (g.degree(v) as f64).ln())
        .collect::<CompensatedSum<f64>>()
        .value()
        / n;
    let l1 = lambda.ln_1p();
    Ok(
        n * lambda * (mean_log + ratio.ln() + l1.ln() + 1.0)
            / ((1.0 + ratio) * (1.0 + lambda) * l1),
    )
}

fn candidate(g: &Graph, a: VertexSet) -> (usize, VertexSet) {
    (a.iter().map(|v| g.degree(v)).sum(), a)
}

/// Higher cut first, then the lexicographically smaller set.
fn better(x: (usize, VertexSet), y: (usize, VertexSet)) -> (usize, VertexSet) {
    if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
        y
    } else {
        x
    }
}

fn trial_seed(seed: u64, t: usize) -> u64 {
    seed ^ (t as u64)
        .wrapping_add(1)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Samples `trials` independent sets from the hard-core model and keeps the
/// one with the most edges to its complement.
pub fn semi_bipartite_extract(
    g: &Graph,
    options: SemiBipartiteOptions,
) -> Result<SemiBipartite, ConstructionError> {
    if let Some(t) = g.find_triangle() {
        return Err(crate::hardcore::HardcoreError::NotTriangleFree(t).into());
    }
    if options.trials == 0 {
        return Err(ConstructionError::NoTrials);
    }
    let lambda = match options.lambda {
        LambdaMode::Fixed(l) => l,
        LambdaMode::Auto => auto_lambda(g)?,
    };
    let fug = Fugacity::new(lambda)?;
    let exact = match options.sample {
        SampleMode::Exact => true,
        SampleMode::Glauber { .. } => false,
        SampleMode::Auto => options.config.check(g).is_ok(),
    };
    let best = if exact {
        let dist = hard_core_distribution(g, &fug, options.config)?;
        let mut acc = CompensatedSum::default();
        let cdf: Vec<f64> = dist
            .entries
            .iter()
            .map(|(_, p)| {
                acc.add(*p);
                acc.value()
            })
            .collect();
        (0..options.trials)
            .into_par_iter()
            .map(|t| {
                let u: f64 = ChaCha8Rng::seed_from_u64(trial_seed(options.seed, t)).random::<f64>()
                    * acc.value();
                let i = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                candidate(g, dist.entries[i].0.clone())
            })
            .reduce_with(better)
    } else {
        let steps = match options.sample {
            SampleMode::Glauber { steps } => steps,
            _ => 200 * g.n() as u64 + 1000,
        };
        (0..options.trials)
            .into_par_iter()
            .map(|t| {
                let mut chain = GlauberChain::new(g, lambda, trial_seed(options.seed, t));
                chain.run(steps);
                candidate(g, chain.state())
            })
            .reduce_with(better)
    };
    let (cut_edges, a) = best.expect("trials > 0");
    let b: VertexSet = (0..g.n()).filter(|&v| !a.contains(v)).collect();
    debug_assert_eq!(g.edges_between(&a, &b), cut_edges);
    Ok(SemiBipartite {
        avg_degree: if g.n() == 0 {
            0.0
        } else {
            2.0 * cut_edges as f64 / g.n() as f64
        },
        a,
        b,
        cut_edges,
        lambda,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn edgeless_graph() {
        let opts = SemiBipartiteOptions {
            lambda: LambdaMode::Fixed(1.0),
            ..Default::default()
        };
        let out = semi_bipartite_extract(&Graph::empty(5), opts).unwrap();
        assert_eq!(out.avg_degree, 0.0);
        assert_eq!(out.cut_edges, 0);
        assert_eq!(
            semi_bipartite_extract(&Graph::empty(5), Default::default()),
            Err(ConstructionError::Degenerate)
        );
    }

    #[test]
    fn exact_expectations() {
        let one = Fugacity::new(ratio(1, 1)).unwrap();
        let c5: ExpectedCut<Rational> =
            expected_cut(&cycle(5), &one, ExactConfig::default()).unwrap();
        assert_eq!(c5.by_degree, ratio(30, 11));
        assert_eq!(c5.by_neighbourhood, ratio(30, 11));
        let s3: ExpectedCut<Rational> =
            expected_cut(&star(3), &one, ExactConfig::default()).unwrap();
        assert_eq!(s3.by_degree, ratio(5, 3));
        assert_eq!(s3.by_neighbourhood, ratio(5, 3));
    }

    #[test]
    fn extraction_is_semi_bipartite_and_deterministic() {
        let g = random_triangle_free(20, 0.3, 4);
        let opts = SemiBipartiteOptions {
            trials: 32,
            seed: 9,
            ..Default::default()
        };
        let out = semi_bipartite_extract(&g, opts).unwrap();
        assert!(out.exact);
        assert!(g.is_independent(&out.a));
        assert_eq!(out.a.len() + out.b.len(), g.n());
        assert_eq!(g.edges_between(&out.a, &out.b), out.cut_edges);
        assert_eq!(out, semi_bipartite_extract(&g, opts).unwrap());
        let glauber = semi_bipartite_extract(
            &g,
            SemiBipartiteOptions {
                sample: SampleMode::Glauber { steps: 2000 },
                ..opts
            },
        )
        .unwrap();
        assert!(!glauber.exact && g.is_independent(&glauber.a));
    }

    #[test]
    fn best_trial_beats_the_mean() {
        let g = petersen();
        let lambda = auto_lambda(&g).unwrap();
        let mean =
            expected_cut(&g, &Fugacity::new(lambda).unwrap(), ExactConfig::default()).unwrap();
        let out = semi_bipartite_extract(
            &g,
            SemiBipartiteOptions {
                trials: 200,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.cut_edges as f64 >= mean.by_degree);
    }

    #[test]
    fn lower_bound_on_petersen() {
        let g = petersen();
        let lambda = auto_lambda(&g).unwrap();
        assert!((lambda - 1.0 / 3f64.ln()).abs() < 1e-12);
        let bound = semi_bipartite_lower_bound(&g, lambda, lambda).unwrap();
        let e = expected_cut(&g, &Fugacity::new(lambda).unwrap(), ExactConfig::default()).unwrap();
        assert!(e.by_degree >= bound - 1e-9);
        assert!(semi_bipartite_lower_bound(&path(3), 1.0, 1.0).is_ok());
        assert_eq!(
            semi_bipartite_lower_bound(&Graph::empty(2), 1.0, 1.0),
            Err(ConstructionError::Degenerate)
        );
    }

    #[test]
    fn triangle_rejected() {
        assert!(matches!(
            semi_bipartite_extract(&complete(3), Default::default()),
            Err(ConstructionError::Hardcore(
                crate::hardcore::HardcoreError::NotTriangleFree(_)
            ))
        ));
    }
}
