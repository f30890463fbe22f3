use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex, VertexSet};

use super::search::{find_list_colouring, is_proper_list_colouring};
use super::ConstructionError;

/// Colour `index_level`, e.g. `3_0` or `7_1`. Indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColourLabel {
    pub level: usize,
    pub index: usize,
}

impl fmt::Display for ColourLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.index, self.level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionOptions {
    /// Largest number of vertices that may be materialised.
    pub max_vertices: usize,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        Self {
            max_vertices: 1_000_000,
        }
    }
}

/// A bipartite graph with a list assignment that admits no proper list
/// colouring although `|L(a)| >= deg(a) / log deg(a)` on one side and
/// `|L(b)| >= deg(b)` on the other.
///
/// Level 0 is the star `K_{1,δ}` with centre list `{1_0, …, δ_0}` and leaf
/// lists `{i_0}`. Level `i + 1` takes `k = ⌈e^t / t⌉` copies of level `i`,
/// where `t` is the `i`-fold iterated exponential of `δ`, adds a vertex
/// adjacent to every B-vertex with list `{1_{i+1}, …, k_{i+1}}`, and appends
/// colour `j_{i+1}` to the B-lists of copy `j`. Copies occupy consecutive
/// vertex blocks; the new vertex comes last.
#[derive(Clone, Debug, PartialEq)]
pub struct NecessaryInstance {
    pub graph: Graph,
    pub lists: Vec<Vec<ColourLabel>>,
    pub level: usize,
    pub delta: usize,
    /// The A-vertex of maximum degree.
    pub special_vertex: Vertex,
    pub a_side: VertexSet,
    pub b_side: VertexSet,
    /// Number of copies used at each step `1..=level`.
    pub copies: Vec<usize>,
}

/// Outcome of checking the four structural properties.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    /// `A` and `B` partition the vertices and are both independent.
    pub bipartite: bool,
    /// Every A-vertex has degree at least `δ` and the special vertex has the maximum A-degree.
    pub a_degrees: bool,
    /// Every B-vertex has degree `level + 1`.
    pub b_degrees: bool,
    /// `|L(a)| >= deg(a) / ln deg(a)` on `A` and `|L(b)| >= deg(b)` on `B`.
    pub list_sizes: bool,
    pub b_count: usize,
    pub max_a_degree: usize,
    /// Smallest `|L(a)| − deg(a) / ln deg(a)` over `A`.
    pub min_a_list_slack: f64,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.bipartite && self.a_degrees && self.b_degrees && self.list_sizes
    }
}

fn iterated_exp(delta: usize, i: usize) -> f64 {
    (0..i).fold(delta as f64, |t, _| t.exp())
}

impl NecessaryInstance {
    pub fn check_properties(&self) -> PropertyReport {
        let g = &self.graph;
        let cover = self.a_side.len() + self.b_side.len() == g.n()
            && (0..g.n()).all(|v| self.a_side.contains(v) != self.b_side.contains(v));
        let bipartite = cover && g.is_independent(&self.a_side) && g.is_independent(&self.b_side);
        let max_a_degree = self.a_side.iter().map(|a| g.degree(a)).max().unwrap_or(0);
        let a_degrees = self.a_side.iter().all(|a| g.degree(a) >= self.delta)
            && g.degree(self.special_vertex) == max_a_degree
            && self.a_side.contains(self.special_vertex);
        let b_degrees = self.b_side.iter().all(|b| g.degree(b) == self.level + 1);
        let min_a_list_slack = self
            .a_side
            .iter()
            .map(|a| {
                let d = g.degree(a) as f64;
                self.lists[a].len() as f64 - d / d.ln()
            })
            .fold(f64::INFINITY, f64::min);
        let list_sizes = min_a_list_slack >= 0.0
            && self
                .b_side
                .iter()
                .all(|b| self.lists[b].len() >= g.degree(b));
        PropertyReport {
            bipartite,
            a_degrees,
            b_degrees,
            list_sizes,
            b_count: self.b_side.len(),
            max_a_degree,
            min_a_list_slack,
        }
    }

    /// The lists with `extra` appended to `L(vertex)`.
    pub fn lists_with_extra(&self, vertex: Vertex, extra: ColourLabel) -> Vec<Vec<ColourLabel>> {
        let mut lists = self.lists.clone();
        if !lists[vertex].contains(&extra) {
            lists[vertex].push(extra);
        }
        lists
    }
}

fn base_star(delta: usize) -> NecessaryInstance {
    let graph = Graph::from_edges(delta + 1, (1..=delta).map(|leaf| (0, leaf))).expect("star");
    let mut lists = vec![(1..=delta)
        .map(|index| ColourLabel { level: 0, index })
        .collect()];
    lists.extend((1..=delta).map(|index| vec![ColourLabel { level: 0, index }]));
    NecessaryInstance {
        graph,
        lists,
        level: 0,
        delta,
        special_vertex: 0,
        a_side: VertexSet::from([0]),
        b_side: (1..=delta).collect(),
        copies: Vec::new(),
    }
}

fn lift(prev: &NecessaryInstance, copies: usize) -> NecessaryInstance {
    let m = prev.graph.n();
    let hub = copies * m;
    let level = prev.level + 1;
    let mut edges = Vec::new();
    let mut lists = Vec::with_capacity(hub + 1);
    let mut a_side = Vec::new();
    let mut b_side = Vec::new();
    for j in 0..copies {
        let off = j * m;
        edges.extend(prev.graph.edges().map(|(u, v)| (u + off, v + off)));
        for v in 0..m {
            let mut list = prev.lists[v].clone();
            if prev.b_side.contains(v) {
                list.push(ColourLabel {
                    level,
                    index: j + 1,
                });
                edges.push((v + off, hub));
                b_side.push(v + off);
            } else {
                a_side.push(v + off);
            }
            lists.push(list);
        }
    }
    a_side.push(hub);
    lists.push(
        (1..=copies)
            .map(|index| ColourLabel { level, index })
            .collect(),
    );
    let mut copies_per_level = prev.copies.clone();
    copies_per_level.push(copies);
    NecessaryInstance {
        graph: Graph::from_edges(hub + 1, edges).expect("copies are disjoint"),
        lists,
        level,
        delta: prev.delta,
        special_vertex: hub,
        a_side: a_side.into_iter().collect(),
        b_side: b_side.into_iter().collect(),
        copies: copies_per_level,
    }
}

/// Builds the level-`level` instance for minimum degree `delta` and checks
/// its structural properties.
pub fn necessary_construction(
    delta: usize,
    level: usize,
    options: ConstructionOptions,
) -> Result<NecessaryInstance, ConstructionError> {
    if delta < 3 {
        return Err(ConstructionError::DeltaTooSmall(delta));
    }
    if level > delta - 1 {
        return Err(ConstructionError::LevelTooLarge { level, delta });
    }
    let mut size = (delta + 1) as f64;
    let mut plan = Vec::new();
    for i in 0..level {
        let t = iterated_exp(delta, i);
        let copies = (t.exp() / t).ceil();
        size = copies * size + 1.0;
        if !size.is_finite() || size > options.max_vertices as f64 {
            return Err(ConstructionError::SizeCap {
                vertices: size,
                cap: options.max_vertices,
            });
        }
        plan.push(copies as usize);
    }
    if size > options.max_vertices as f64 {
        return Err(ConstructionError::SizeCap {
            vertices: size,
            cap: options.max_vertices,
        });
    }
    let inst = plan
        .into_iter()
        .fold(base_star(delta), |prev, copies| lift(&prev, copies));
    let report = inst.check_properties();
    let checks = [
        (1, report.bipartite, "parts are not a bipartition"),
        (2, report.a_degrees, "A-degrees"),
        (3, report.b_degrees, "B-degrees"),
        (4, report.list_sizes, "list sizes"),
    ];
    if let Some(&(property, _, detail)) = checks.iter().find(|c| !c.1) {
        return Err(ConstructionError::Property {
            property,
            detail: detail.to_string(),
        });
    }
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// Exhaustive search found no proper list colouring.
    pub not_colourable: bool,
    /// The recursive argument: with the special vertex coloured `j`, copy `j`
    /// loses exactly that colour and is again a lower-level instance.
    pub structural: bool,
}

/// Structural recursion on the vertex block `[start, start + size)` of a
/// level-`level` instance.
fn structural(
    inst: &NecessaryInstance,
    lists: &[Vec<ColourLabel>],
    start: usize,
    level: usize,
) -> bool {
    if level == 0 {
        // star: centre list equals the union of the leaf singletons
        let centre = &lists[start];
        let leaves: Vec<ColourLabel> = (1..=inst.delta).map(|k| lists[start + k][0]).collect();
        let mut c = centre.clone();
        c.sort();
        let mut l = leaves;
        l.sort();
        return (1..=inst.delta).all(|k| lists[start + k].len() == 1) && c == l;
    }
    let block = block_size(inst, level - 1);
    let copies = inst.copies[level - 1];
    let hub = start + copies * block;
    for &colour in &lists[hub] {
        if colour.level != level || colour.index == 0 || colour.index > copies {
            return false;
        }
        let off = start + (colour.index - 1) * block;
        let reduced: Vec<Vec<ColourLabel>> = (0..off + block)
            .map(|v| {
                if v >= off {
                    lists[v].iter().copied().filter(|&x| x != colour).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        // every label of the copy other than its own level-`level` colour must be from a lower level
        let clean = (off..off + block).all(|v| reduced[v].iter().all(|x| x.level < level));
        if !clean || !structural(inst, &reduced, off, level - 1) {
            return false;
        }
    }
    true
}

fn block_size(inst: &NecessaryInstance, level: usize) -> usize {
    inst.copies[..level]
        .iter()
        .fold(inst.delta + 1, |n, &k| k * n + 1)
}

/// Exhaustive search for a list colouring, cross-checked by the recursive
/// structural argument.
pub fn verify_not_colourable(
    inst: &NecessaryInstance,
    budget: u64,
) -> Result<VerifyReport, ConstructionError> {
    let found = find_list_colouring(&inst.graph, &inst.lists, budget)?;
    if let Some(col) = &found {
        debug_assert!(is_proper_list_colouring(&inst.graph, &inst.lists, col));
    }
    Ok(VerifyReport {
        not_colourable: found.is_none(),
        structural: structural(inst, &inst.lists, 0, inst.level),
    })
}
