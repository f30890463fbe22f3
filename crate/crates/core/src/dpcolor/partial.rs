use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Vertex, VertexSet};

use super::{
    finishing_blow_hypothesis, solve, verify_dp_colouring, ColourNode, Cover, DpError,
    HypothesisReport, SolveOptions,
};

/// An independent set `I` of `H` with at most one node per list, and the
/// residual lists `L_I(u) = L(u) ∖ N_H(I)` of the vertices outside `dom(I)`.
#[derive(Clone, Debug)]
pub struct PartialDpState<'c> {
    cover: &'c Cover,
    chosen: Vec<Option<ColourNode>>,
    blocked: Vec<bool>,
    residual_len: Vec<usize>,
}

impl<'c> PartialDpState<'c> {
    pub fn new(cover: &'c Cover) -> Self {
        Self {
            cover,
            chosen: vec![None; cover.base().n()],
            blocked: vec![false; cover.node_count()],
            residual_len: (0..cover.base().n()).map(|u| cover.list(u).len()).collect(),
        }
    }

    pub fn cover(&self) -> &'c Cover {
        self.cover
    }

    /// Adds `node` to `I`. It must lie in the residual list of its owner.
    pub fn choose(&mut self, node: ColourNode) -> Result<(), DpError> {
        if node >= self.cover.node_count() {
            return Err(DpError::NodeOutOfRange {
                node,
                nodes: self.cover.node_count(),
            });
        }
        let u = self.cover.owner(node);
        if self.chosen[u].is_some() || self.blocked[node] {
            return Err(DpError::InvalidChoice { vertex: u, node });
        }
        self.chosen[u] = Some(node);
        for &w in self.cover.cross_neighbours(node) {
            if !self.blocked[w] {
                self.blocked[w] = true;
                self.residual_len[self.cover.owner(w)] -= 1;
            }
        }
        Ok(())
    }

    pub fn chosen(&self, u: Vertex) -> Option<ColourNode> {
        self.chosen[u]
    }

    /// `dom(I)`.
    pub fn domain(&self) -> VertexSet {
        (0..self.chosen.len())
            .filter(|&u| self.chosen[u].is_some())
            .collect()
    }

    pub fn independent_set(&self) -> Vec<ColourNode> {
        self.chosen.iter().flatten().copied().collect()
    }

    /// `L_I(u)`; empty for `u ∈ dom(I)`.
    pub fn residual(&self, u: Vertex) -> Vec<ColourNode> {
        if self.chosen[u].is_some() {
            return Vec::new();
        }
        self.cover
            .list(u)
            .iter()
            .copied()
            .filter(|&c| !self.blocked[c])
            .collect()
    }

    pub fn residual_len(&self, u: Vertex) -> usize {
        if self.chosen[u].is_some() {
            0
        } else {
            self.residual_len[u]
        }
    }

    /// `L_I(u)` recomputed from `I` alone, for consistency checks.
    pub fn residual_from_scratch(&self, u: Vertex) -> Vec<ColourNode> {
        if self.chosen[u].is_some() {
            return Vec::new();
        }
        let picked = self.independent_set();
        self.cover
            .list(u)
            .iter()
            .copied()
            .filter(|&c| {
                picked
                    .iter()
                    .all(|&p| !self.cover.cross_neighbours(p).contains(&c))
            })
            .collect()
    }

    /// `𝓗_I` on `G_I = G − dom(I)`, with the kept base vertices and the old
    /// id of every residual colour node.
    pub fn residual_cover(&self) -> Result<(Cover, Vec<Vertex>, Vec<ColourNode>), DpError> {
        let keep: VertexSet = (0..self.chosen.len())
            .filter(|&u| self.chosen[u].is_none())
            .collect();
        let sub = self.cover.base().induced_subgraph(&keep)?;
        let mut new_id = vec![usize::MAX; self.cover.node_count()];
        let mut old = Vec::new();
        let mut owner = Vec::new();
        for (local, u) in keep.iter().enumerate() {
            for c in self.residual(u) {
                new_id[c] = old.len();
                old.push(c);
                owner.push(local);
            }
        }
        let edges = self
            .cover
            .cross_edges()
            .iter()
            .filter(|&&(a, b)| new_id[a] != usize::MAX && new_id[b] != usize::MAX)
            .map(|&(a, b)| (new_id[a], new_id[b]));
        let cover = Cover::new(sub.graph, owner, edges)?;
        Ok((cover, sub.to_parent, old))
    }

    /// Combines `I` with a colouring of the residual cover.
    pub fn complete(
        &self,
        residual_choice: &[ColourNode],
        kept: &[Vertex],
        old: &[ColourNode],
    ) -> Vec<ColourNode> {
        let mut out: Vec<ColourNode> = self
            .chosen
            .iter()
            .map(|c| c.unwrap_or(usize::MAX))
            .collect();
        for (local, &c) in residual_choice.iter().enumerate() {
            out[kept[local]] = old[c];
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhaseOptions {
    pub rounds: usize,
    pub seed: u64,
    /// Probability that a vertex tries to pick a colour in phase one.
    pub activation: f64,
    /// Resampling budget for the unconditional solve after every round
    /// failed the hypothesis; `None` disables it.
    pub fallback_resamples: Option<u64>,
}

impl Default for TwoPhaseOptions {
    fn default() -> Self {
        Self {
            rounds: 10,
            seed: 0,
            activation: 0.5,
            fallback_resamples: Some(100_000),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhaseReport {
    pub rounds: usize,
    /// `(u, |L_I(u)|, ℓ(u))` for `u ∉ dom(I)` in the last round.
    pub residual: Vec<(Vertex, usize, usize)>,
    pub max_star_degree: usize,
    pub hypothesis: HypothesisReport,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TwoPhaseOutcome {
    Coloured {
        choice: Vec<ColourNode>,
        /// `|I|` after phase one.
        phase_one: usize,
        round: usize,
        fallback: bool,
    },
    Failed(TwoPhaseReport),
}

/// Heuristic two-phase colouring.
///
/// Phase one visits the vertices in random order; an activated vertex picks
/// a uniform node of its residual list, kept only if every other residual
/// list stays at least `ℓ` long. Phase two checks the finishing-blow
/// hypothesis on the residual cover and, if it holds, solves it. Failing
/// rounds restart with fresh randomness.
pub fn two_phase_colour(
    c: &Cover,
    ell: &[usize],
    options: &TwoPhaseOptions,
) -> Result<TwoPhaseOutcome, DpError> {
    let g = c.base();
    if let Some(t) = g.find_triangle() {
        return Err(DpError::NotTriangleFree(t));
    }
    if ell.len() != g.n() {
        return Err(DpError::LengthMismatch {
            expected: g.n(),
            found: ell.len(),
        });
    }
    let mut last: Option<(
        PartialDpState<'_>,
        Cover,
        Vec<Vertex>,
        Vec<ColourNode>,
        HypothesisReport,
    )> = None;
    for round in 0..options.rounds.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(
            options
                .seed
                .wrapping_add((round as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut state = PartialDpState::new(c);
        let mut order: Vec<Vertex> = (0..g.n()).collect();
        order.shuffle(&mut rng);
        for u in order {
            if !rng.random_bool(options.activation) {
                continue;
            }
            let res = state.residual(u);
            if res.is_empty() {
                continue;
            }
            let node = res[rng.random_range(0..res.len())];
            let safe = c.cross_neighbours(node).iter().all(|&w| {
                let x = c.owner(w);
                state.chosen(x).is_some() || state.blocked[w] || state.residual_len(x) > ell[x]
            });
            if safe {
                state.choose(node)?;
            }
        }
        let (sub, kept, old) = state.residual_cover()?;
        let sub_ell: Vec<usize> = kept.iter().map(|&u| ell[u]).collect();
        let report = finishing_blow_hypothesis(&sub, &sub_ell)?;
        if report.passes() {
            let opts = SolveOptions {
                seed: rng.random(),
                max_resamples: 1_000_000,
                ell: Some(sub_ell),
            };
            let out = solve(&sub, &opts)?;
            let choice = state.complete(&out.choice, &kept, &old);
            verify_dp_colouring(c, &choice).map_err(DpError::Verification)?;
            return Ok(TwoPhaseOutcome::Coloured {
                choice,
                phase_one: state.independent_set().len(),
                round,
                fallback: false,
            });
        }
        last = Some((state, sub, kept, old, report));
    }
    let (state, sub, kept, old, report) = last.expect("at least one round");
    if let Some(budget) = options.fallback_resamples {
        let opts = SolveOptions {
            seed: options.seed,
            max_resamples: budget,
            ell: None,
        };
        match solve(&sub, &opts) {
            Ok(out) => {
                let choice = state.complete(&out.choice, &kept, &old);
                verify_dp_colouring(c, &choice).map_err(DpError::Verification)?;
                return Ok(TwoPhaseOutcome::Coloured {
                    choice,
                    phase_one: state.independent_set().len(),
                    round: options.rounds.max(1) - 1,
                    fallback: true,
                });
            }
            Err(DpError::GaveUp { .. } | DpError::EmptyList(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(TwoPhaseOutcome::Failed(TwoPhaseReport {
        rounds: options.rounds.max(1),
        residual: kept
            .iter()
            .enumerate()
            .map(|(local, &u)| (u, sub.list(local).len(), ell[u]))
            .collect(),
        max_star_degree: (0..sub.node_count())
            .map(|x| sub.star_degree(x))
            .max()
            .unwrap_or(0),
        hypothesis: report,
    }))
}
