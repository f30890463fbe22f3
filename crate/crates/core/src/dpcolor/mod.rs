//! Correspondence (DP) colouring.
//!
//! A [`Cover`] of a base graph `G` assigns each vertex `u` a list `L(u)` of
//! colour nodes and joins colour nodes of adjacent vertices by matchings.
//! Colour nodes in the same list are pairwise adjacent by definition; that
//! clique is never stored, so the stored edges are exactly those of `H*` and
//! the cross-edge degree of a node is its star degree `deg*`.
//!
//! An `𝓗`-colouring picks one colour node per base vertex with no cross edge
//! between two picked nodes.

mod lll;
mod partial;
mod random;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

pub use lll::{
    finishing_blow_hypothesis, lll_certify, lll_evaluate, HypothesisFailure, HypothesisReport,
    LllCertificate,
};
pub use partial::{
    two_phase_colour, PartialDpState, TwoPhaseOptions, TwoPhaseOutcome, TwoPhaseReport,
};
pub use random::{random_cover, random_list_assignment};
pub use solve::{solve, verify_dp_colouring, DpViolation, SolveOptions, SolveOutcome};

/// Dense colour node id.
pub type ColourNode = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DpError {
    #[error("colour node {node} out of range for a cover with {nodes} nodes")]
    NodeOutOfRange { node: ColourNode, nodes: usize },
    #[error("colour node {node} is owned by {owner}, not a vertex of the base graph")]
    OwnerOutOfRange { node: ColourNode, owner: Vertex },
    #[error("cross edge joins colour node {0} to itself")]
    LoopEdge(ColourNode),
    #[error("expected one entry per base vertex ({expected}), got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("list of vertex {vertex} has {len} nodes, fewer than ell = {ell}")]
    ListTooShort {
        vertex: Vertex,
        len: usize,
        ell: usize,
    },
    #[error("list key {0:?} is not a vertex id")]
    BadVertexKey(String),
    #[error("node {node} cannot be added for vertex {vertex}")]
    InvalidChoice { vertex: Vertex, node: ColourNode },
    #[error("base graph has a triangle {0:?}")]
    NotTriangleFree((Vertex, Vertex, Vertex)),
    #[error("vertex {0} has an empty list")]
    EmptyList(Vertex),
    #[error("finishing-blow hypothesis fails: {0}")]
    Hypothesis(HypothesisReport),
    #[error("gave up after {resamples} resamples")]
    GaveUp { resamples: u64 },
    #[error("invalid cover: {0}")]
    InvalidCover(CoverViolation),
    #[error("invalid colouring: {0}")]
    Verification(DpViolation),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A cover `(L, H)` of a base graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    base: Graph,
    owner: Vec<Vertex>,
    lists: Vec<Vec<ColourNode>>,
    cross: Vec<Vec<ColourNode>>,
    edges: Vec<(ColourNode, ColourNode)>,
}

impl Cover {
    /// Builds a cover from node owners and cross edges. Repeated edges are
    /// merged; the cover axioms are checked separately by [`validate_cover`].
    pub fn new(
        base: Graph,
        owner: Vec<Vertex>,
        cross_edges: impl IntoIterator<Item = (ColourNode, ColourNode)>,
    ) -> Result<Self, DpError> {
        let nodes = owner.len();
        let mut lists = vec![Vec::new(); base.n()];
        for (node, &u) in owner.iter().enumerate() {
            if u >= base.n() {
                return Err(DpError::OwnerOutOfRange { node, owner: u });
            }
            lists[u].push(node);
        }
        let mut edges = BTreeSet::new();
        for (a, b) in cross_edges {
            for node in [a, b] {
                if node >= nodes {
                    return Err(DpError::NodeOutOfRange { node, nodes });
                }
            }
            if a == b {
                return Err(DpError::LoopEdge(a));
            }
            edges.insert((a.min(b), a.max(b)));
        }
        let mut cross = vec![Vec::new(); nodes];
        for &(a, b) in &edges {
            cross[a].push(b);
            cross[b].push(a);
        }
        for c in &mut cross {
            c.sort_unstable();
        }
        Ok(Self {
            base,
            owner,
            lists,
            cross,
            edges: edges.into_iter().collect(),
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, c: ColourNode) -> Vertex {
        self.owner[c]
    }

    pub fn owners(&self) -> &[Vertex] {
        &self.owner
    }

    /// `L(u)`, increasing.
    pub fn list(&self, u: Vertex) -> &[ColourNode] {
        &self.lists[u]
    }

    /// Cross-edge neighbours of `c`, increasing.
    pub fn cross_neighbours(&self, c: ColourNode) -> &[ColourNode] {
        &self.cross[c]
    }

    /// Cross edges `(a, b)` with `a < b`, lexicographic.
    pub fn cross_edges(&self) -> &[(ColourNode, ColourNode)] {
        &self.edges
    }

    /// `deg*(c)`.
    pub fn star_degree(&self, c: ColourNode) -> usize {
        self.cross[c].len()
    }

    /// `true` for the first `ell[u]` nodes of every list `L(u)`.
    pub(crate) fn prefix_mask(&self, ell: &[usize]) -> Vec<bool> {
        let mut keep = vec![false; self.node_count()];
        for (u, list) in self.lists.iter().enumerate() {
            for &c in list.iter().take(ell[u]) {
                keep[c] = true;
            }
        }
        keep
    }

    /// The sub-cover on the first `ell[u]` nodes of each list, relabelled
    /// densely, with the map from new to old node ids.
    pub fn truncated(&self, ell: &[usize]) -> Result<(Cover, Vec<ColourNode>), DpError> {
        if ell.len() != self.base.n() {
            return Err(DpError::LengthMismatch {
                expected: self.base.n(),
                found: ell.len(),
            });
        }
        let keep = self.prefix_mask(ell);
        let old: Vec<ColourNode> = (0..self.node_count()).filter(|&c| keep[c]).collect();
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &c) in old.iter().enumerate() {
            new_id[c] = i;
        }
        let owner = old.iter().map(|&c| self.owner[c]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep[a] && keep[b])
            .map(|&(a, b)| (new_id[a], new_id[b]));
        Ok((Cover::new(self.base.clone(), owner, edges)?, old))
    }
}

/// Free-function form of [`Cover::star_degree`].
pub fn star_degree(c: &Cover, node: ColourNode) -> usize {
    c.star_degree(node)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverViolation {
    /// Both ends of a cross edge lie in the same list.
    SameOwner { a: ColourNode, b: ColourNode },
    /// A cross edge between lists of non-adjacent vertices.
    OwnersNotAdjacent { a: ColourNode, b: ColourNode },
    /// `node` has more than one cross edge into `L(vertex)`.
    NotMatching { node: ColourNode, vertex: Vertex },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SameOwner { a, b } => write!(f, "cross edge {a}-{b} stays inside one list"),
            Self::OwnersNotAdjacent { a, b } => {
                write!(f, "cross edge {a}-{b} joins lists of non-adjacent vertices")
            }
            Self::NotMatching { node, vertex } => {
                write!(
                    f,
                    "node {node} has several cross edges into the list of vertex {vertex}"
                )
            }
        }
    }
}

/// First violated cover axiom, if any.
///
/// Owners partition the colour nodes by construction and same-list cliques
/// are implicit, so only the cross-edge axioms can fail.
pub fn validate_cover(c: &Cover) -> Result<(), CoverViolation> {
    for &(a, b) in c.cross_edges() {
        let (u, v) = (c.owner(a), c.owner(b));
        if u == v {
            return Err(CoverViolation::SameOwner { a, b });
        }
        if !c.base().has_edge(u, v) {
            return Err(CoverViolation::OwnersNotAdjacent { a, b });
        }
    }
    for node in 0..c.node_count() {
        let mut seen = BTreeSet::new();
        for &w in c.cross_neighbours(node) {
            if !seen.insert(c.owner(w)) {
                return Err(CoverViolation::NotMatching {
                    node,
                    vertex: c.owner(w),
                });
            }
        }
    }
    Ok(())
}

/// A cover built from a list assignment, remembering each node's label.
#[derive(Clone, Debug, PartialEq)]
pub struct ListCover<L> {
    pub cover: Cover,
    pub labels: Vec<L>,
}

impl<L: Clone> ListCover<L> {
    /// Labels of a choice of colour nodes.
    pub fn project(&self, choice: &[ColourNode]) -> Vec<L> {
        choice.iter().map(|&c| self.labels[c].clone()).collect()
    }
}

/// One colour node per (vertex, label), vertex-major with labels increasing;
/// `(u, c)` and `(v, c)` are joined iff `uv` is an edge. `𝓗`-colourings of
/// the result are exactly the proper list colourings.
pub fn from_list_assignment<L: Ord + Clone>(
    g: &Graph,
    lists: &[Vec<L>],
) -> Result<ListCover<L>, DpError> {
    if lists.len() != g.n() {
        return Err(DpError::LengthMismatch {
            expected: g.n(),
            found: lists.len(),
        });
    }
    let mut owner = Vec::new();
    let mut labels = Vec::new();
    let mut index: Vec<BTreeMap<L, ColourNode>> = Vec::with_capacity(g.n());
    for (u, list) in lists.iter().enumerate() {
        let sorted: BTreeSet<&L> = list.iter().collect();
        let mut map = BTreeMap::new();
        for label in sorted {
            map.insert(label.clone(), owner.len());
            owner.push(u);
            labels.push(label.clone());
        }
        index.push(map);
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        for (label, &a) in &index[u] {
            if let Some(&b) = index[v].get(label) {
                edges.push((a, b));
            }
        }
    }
    Ok(ListCover {
        cover: Cover::new(g.clone(), owner, edges)?,
        labels,
    })
}

/// Cover file contents. List mode names labels per vertex (keys are vertex
/// ids as strings); explicit mode gives owners and cross edges directly.
/// `graph` is an edge-list path, resolved by the caller.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoverSpec {
    Lists {
        graph: String,
        lists: BTreeMap<String, Vec<i64>>,
    },
    Explicit {
        graph: String,
        owner: Vec<Vertex>,
        cross_edges: Vec<[ColourNode; 2]>,
    },
}

impl CoverSpec {
    pub fn graph_path(&self) -> &str {
        match self {
            Self::Lists { graph, .. } | Self::Explicit { graph, .. } => graph,
        }
    }

    /// Builds the cover over `g`; list mode also returns node labels.
    /// Vertices missing from `lists` get empty lists.
    pub fn build(&self, g: &Graph) -> Result<(Cover, Option<Vec<i64>>), DpError> {
        match self {
            Self::Lists { lists, .. } => {
                let mut per_vertex = vec![Vec::new(); g.n()];
                for (key, labels) in lists {
                    let u: Vertex = key
                        .trim()
                        .parse()
                        .map_err(|_| DpError::BadVertexKey(key.clone()))?;
                    g.check_vertex(u)?;
                    per_vertex[u] = labels.clone();
                }
                let lc = from_list_assignment(g, &per_vertex)?;
                Ok((lc.cover, Some(lc.labels)))
            }
            Self::Explicit {
                owner, cross_edges, ..
            } => Ok((
                Cover::new(
                    g.clone(),
                    owner.clone(),
                    cross_edges.iter().map(|&[a, b]| (a, b)),
                )?,
                None,
            )),
        }
    }
}
