use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Vertex;

use super::{ColourNode, Cover, DpError};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    /// Bad events resampled before giving up.
    pub max_resamples: u64,
    /// Restrict each list `L(u)` to its first `ell[u]` nodes.
    pub ell: Option<Vec<usize>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_resamples: 1_000_000,
            ell: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    /// `choice[u] ∈ L(u)`.
    pub choice: Vec<ColourNode>,
    pub resamples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpViolation {
    WrongLength {
        expected: usize,
        found: usize,
    },
    /// `choice[vertex]` is not in `L(vertex)`.
    WrongOwner {
        vertex: Vertex,
        node: ColourNode,
    },
    /// Both ends of a cross edge are chosen.
    Conflict {
        a: ColourNode,
        b: ColourNode,
    },
}

impl fmt::Display for DpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongLength { expected, found } => {
                write!(f, "{found} choices for {expected} vertices")
            }
            Self::WrongOwner { vertex, node } => write!(f, "node {node} is not in L({vertex})"),
            Self::Conflict { a, b } => {
                write!(f, "chosen nodes {a} and {b} are joined by a cross edge")
            }
        }
    }
}

/// Independent check of an `𝓗`-colouring: one node from each list and no
/// cross edge with both ends chosen.
pub fn verify_dp_colouring(c: &Cover, choice: &[ColourNode]) -> Result<(), DpViolation> {
    let n = c.base().n();
    if choice.len() != n {
        return Err(DpViolation::WrongLength {
            expected: n,
            found: choice.len(),
        });
    }
    let mut chosen = vec![false; c.node_count()];
    for (u, &node) in choice.iter().enumerate() {
        if node >= c.node_count() || c.owner(node) != u {
            return Err(DpViolation::WrongOwner { vertex: u, node });
        }
        chosen[node] = true;
    }
    for &(a, b) in c.cross_edges() {
        if chosen[a] && chosen[b] {
            return Err(DpViolation::Conflict { a, b });
        }
    }
    Ok(())
}

struct Sampler<'c> {
    cover: &'c Cover,
    lists: Vec<&'c [ColourNode]>,
    choice: Vec<ColourNode>,
    chosen: Vec<bool>,
    violated: BTreeSet<(ColourNode, ColourNode)>,
    rng: ChaCha8Rng,
}

impl Sampler<'_> {
    fn draw(&mut self, u: Vertex) {
        let old = self.choice[u];
        if old != usize::MAX {
            self.chosen[old] = false;
            for &w in self.cover.cross_neighbours(old) {
                self.violated.remove(&(old.min(w), old.max(w)));
            }
        }
        let list = self.lists[u];
        let node = list[self.rng.random_range(0..list.len())];
        self.choice[u] = node;
        self.chosen[node] = true;
        for &w in self.cover.cross_neighbours(node) {
            if self.chosen[w] {
                self.violated.insert((node.min(w), node.max(w)));
            }
        }
    }
}

/// Moser–Tardos resampling: draw one node per list uniformly, then while
/// some cross edge has both ends chosen, redraw both owners of the first
/// such edge in canonical order. Deterministic for a fixed seed.
pub fn solve(c: &Cover, options: &SolveOptions) -> Result<SolveOutcome, DpError> {
    let n = c.base().n();
    let lists: Vec<&[ColourNode]> = match &options.ell {
        Some(ell) => {
            if ell.len() != n {
                return Err(DpError::LengthMismatch {
                    expected: n,
                    found: ell.len(),
                });
            }
            (0..n)
                .map(|u| &c.list(u)[..ell[u].min(c.list(u).len())])
                .collect()
        }
        None => (0..n).map(|u| c.list(u)).collect(),
    };
    if let Some(u) = lists.iter().position(|l| l.is_empty()) {
        return Err(DpError::EmptyList(u));
    }
    let mut s = Sampler {
        cover: c,
        lists,
        choice: vec![usize::MAX; n],
        chosen: vec![false; c.node_count()],
        violated: BTreeSet::new(),
        rng: ChaCha8Rng::seed_from_u64(options.seed),
    };
    for u in 0..n {
        s.draw(u);
    }
    let mut resamples = 0u64;
    while let Some(&(a, b)) = s.violated.first() {
        if resamples >= options.max_resamples {
            return Err(DpError::GaveUp { resamples });
        }
        resamples += 1;
        s.draw(c.owner(a));
        s.draw(c.owner(b));
    }
    verify_dp_colouring(c, &s.choice).map_err(DpError::Verification)?;
    Ok(SolveOutcome {
        choice: s.choice,
        resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpcolor::{from_list_assignment, lll_certify, random_cover};
    use crate::graph::generators::*;
    use crate::graph::Graph;

    #[test]
    fn no_cross_edges_needs_no_resampling() {
        let c = Cover::new(path(2), vec![0, 0, 1], []).unwrap();
        let out = solve(&c, &SolveOptions::default()).unwrap();
        assert_eq!(out.resamples, 0);
        assert!(verify_dp_colouring(&c, &out.choice).is_ok());
    }

    #[test]
    fn k2_full_correspondence() {
        let lc = from_list_assignment(&path(2), &vec![vec![1, 2, 3]; 2]).unwrap();
        for seed in 0..20 {
            let out = solve(
                &lc.cover,
                &SolveOptions {
                    seed,
                    ..Default::default()
                },
            )
            .unwrap();
            let labels = lc.project(&out.choice);
            assert_ne!(labels[0], labels[1]);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let g = random_graph(80, 0.08, 5);
        let c = random_cover(&g, 24, 3, 0.6, 9);
        let opts = SolveOptions {
            seed: 4,
            ..Default::default()
        };
        assert_eq!(solve(&c, &opts).unwrap(), solve(&c, &opts).unwrap());
    }

    #[test]
    fn certified_instance_of_two_hundred_vertices() {
        let g = random_graph(200, 0.04, 1);
        let c = random_cover(&g, 24, 3, 0.7, 2);
        let ell = vec![24; 200];
        assert!(lll_certify(&c, &ell).unwrap().certified());
        let out = solve(
            &c,
            &SolveOptions {
                seed: 7,
                ell: Some(ell),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(verify_dp_colouring(&c, &out.choice).is_ok());
    }

    #[test]
    fn errors() {
        let c = Cover::new(path(2), vec![0], []).unwrap();
        assert_eq!(
            solve(&c, &SolveOptions::default()),
            Err(DpError::EmptyList(1))
        );
        // K2 with single equal colours can never be coloured
        let lc = from_list_assignment(&path(2), &[vec![1], vec![1]]).unwrap();
        let opts = SolveOptions {
            max_resamples: 50,
            ..Default::default()
        };
        assert_eq!(
            solve(&lc.cover, &opts),
            Err(DpError::GaveUp { resamples: 50 })
        );
    }

    #[test]
    fn verifier_catches_bad_choices() {
        let lc = from_list_assignment(&path(2), &[vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(
            verify_dp_colouring(&lc.cover, &[0, 2]),
            Err(DpViolation::Conflict { a: 0, b: 2 })
        );
        assert_eq!(
            verify_dp_colouring(&lc.cover, &[2, 3]),
            Err(DpViolation::WrongOwner { vertex: 0, node: 2 })
        );
        assert_eq!(
            verify_dp_colouring(&lc.cover, &[0]),
            Err(DpViolation::WrongLength {
                expected: 2,
                found: 1
            })
        );
        assert!(
            verify_dp_colouring(&Cover::new(Graph::empty(0), vec![], []).unwrap(), &[]).is_ok()
        );
    }
}
