//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Graphs are immutable once built. Derived graphs (induced subgraphs)
//! carry the map back to the parent's vertex ids.

mod canon;
pub mod generators;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canon::{canonical_code, connected_triangle_free_graphs, isomorphic, triangle_free_graphs};

/// Dense vertex id.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
}

/// Sorted set of distinct vertex ids.
///
/// The derived ordering is lexicographic on the sorted member list, which is
/// the canonical order used throughout the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from members that are already sorted and distinct.
    pub(crate) fn from_sorted_unchecked(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn members(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    /// Maps every member through `f` and re-canonicalises.
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        self.0.iter().map(|&v| f(v)).collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut members: Vec<Vertex> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self(members)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(members: Vec<Vertex>) -> Self {
        members.into_iter().collect()
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(members: [Vertex; N]) -> Self {
        members.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
}

/// An induced subgraph together with the map from its ids to the parent's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_parent[i]` is the parent id of local vertex `i`; strictly increasing.
    pub to_parent: Vec<Vertex>,
}

impl InducedSubgraph {
    /// The whole graph viewed as its own induced subgraph.
    pub fn whole(g: &Graph) -> Self {
        Self {
            graph: g.clone(),
            to_parent: (0..g.n()).collect(),
        }
    }

    /// Local id of a parent vertex, if kept.
    pub fn local(&self, parent: Vertex) -> Option<Vertex> {
        self.to_parent.binary_search(&parent).ok()
    }

    /// Maps a set of local ids to parent ids (order preserving).
    pub fn lift(&self, set: &VertexSet) -> VertexSet {
        VertexSet::from_sorted_unchecked(set.iter().map(|v| self.to_parent[v]).collect())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting loops, out-of-range ids and repeated edges.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Breadth-first layers `N^0(v), N^1(v), ..., N^max_distance(v)`.
    ///
    /// Trailing layers beyond the eccentricity of `v` are empty.
    pub fn distance_layers(
        &self,
        v: Vertex,
        max_distance: usize,
    ) -> Result<Vec<VertexSet>, GraphError> {
        self.check_vertex(v)?;
        let mut dist = vec![usize::MAX; self.n()];
        let mut layers: Vec<Vec<Vertex>> = vec![Vec::new(); max_distance + 1];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            layers[d].push(u);
            if d == max_distance {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(layers.into_iter().map(VertexSet::from).collect())
    }

    /// Vertices at distance exactly `j` from `v`.
    pub fn neighbourhood_at_distance(&self, v: Vertex, j: usize) -> Result<VertexSet, GraphError> {
        Ok(self
            .distance_layers(v, j)?
            .pop()
            .expect("at least one layer"))
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangle().is_none()
    }

    /// Lexicographically first triangle `(a, b, c)` with `a < b < c`.
    pub fn find_triangle(&self) -> Option<(Vertex, Vertex, Vertex)> {
        for (a, b) in self.edges() {
            // sorted-list intersection restricted to c > b
            let (na, nb) = (&self.adjacency[a], &self.adjacency[b]);
            let (mut i, mut j) = (0, 0);
            while i < na.len() && j < nb.len() {
                match na[i].cmp(&nb[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if na[i] > b {
                            return Some((a, b, na[i]));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        None
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| self.adjacency[v].iter().all(|&w| !set.contains(w)))
    }

    /// `g[keep]`, relabelled to `0..|keep|` in increasing parent order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        for v in keep.iter() {
            self.check_vertex(v)?;
        }
        let mut local = vec![usize::MAX; self.n()];
        for (i, v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|v| {
                self.adjacency[v]
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX)
                    .map(|&w| local[w])
                    .collect()
            })
            .collect();
        Ok(InducedSubgraph {
            graph: Self { adjacency },
            to_parent: keep.members().to_vec(),
        })
    }

    /// Connected component containing `v`, sorted.
    pub fn component(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        let mut seen = vec![false; self.n()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        Ok((0..self.n()).filter(|&u| seen[u]).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0
            || self
                .component(0)
                .map(|c| c.len() == self.n())
                .unwrap_or(false)
    }

    /// Number of edges with one end in `a` and the other in `b`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter()
            .map(|u| self.adjacency[u].iter().filter(|&&w| b.contains(w)).count())
            .sum()
    }
}
