//! Isomorphism-free enumeration of small triangle-free graphs.
//!
//! Both the canonical code and the isomorphism test use colour refinement
//! plus individualisation. The canonical code explores every branch of the
//! search tree and keeps the lexicographically smallest relabelled adjacency
//! code; the isomorphism test stops at the first match. Only meant for
//! graphs on at most 16 vertices.

use std::collections::HashMap;

use super::{Graph, Vertex};

const MAX_CANON: usize = 16;

/// Upper-triangle adjacency bits under a relabelling; `labels[v]` is the new id of `v`.
fn code_under(adj: &[u32], labels: &[usize]) -> u128 {
    let n = adj.len();
    let mut inv = vec![0usize; n];
    for (v, &l) in labels.iter().enumerate() {
        inv[l] = v;
    }
    let mut code = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            code <<= 1;
            if adj[inv[i]] >> inv[j] & 1 == 1 {
                code |= 1;
            }
        }
    }
    code
}

/// Refines an ordered partition until equitable.
fn refine(adj: &[u32], mut cells: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    loop {
        let mut cell_of = vec![0usize; adj.len()];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let k = cells.len();
        let mut next = Vec::with_capacity(k);
        for cell in &cells {
            let mut keyed: Vec<(Vec<usize>, Vertex)> = cell
                .iter()
                .map(|&v| {
                    let mut counts = vec![0usize; k];
                    let mut bits = adj[v];
                    while bits != 0 {
                        let w = bits.trailing_zeros() as usize;
                        counts[cell_of[w]] += 1;
                        bits &= bits - 1;
                    }
                    (counts, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn search(adj: &[u32], cells: Vec<Vec<Vertex>>, best: &mut Option<u128>) {
    let cells = refine(adj, cells);
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let mut labels = vec![0usize; adj.len()];
        for (i, cell) in cells.iter().enumerate() {
            labels[cell[0]] = i;
        }
        let code = code_under(adj, &labels);
        if best.is_none_or(|b| code < b) {
            *best = Some(code);
        }
        return;
    };
    for &v in &cells[target] {
        let mut split = cells[..target].to_vec();
        split.push(vec![v]);
        split.push(cells[target].iter().copied().filter(|&w| w != v).collect());
        split.extend_from_slice(&cells[target + 1..]);
        search(adj, split, best);
    }
}

fn bitmasks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbours(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

#[cfg(test)]
fn from_code(n: usize, code: u128) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut bit = total;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("decoded code is simple")
}

/// Canonical adjacency code: equal for two graphs iff they are isomorphic.
///
/// Panics for graphs with more than 16 vertices.
pub fn canonical_code(g: &Graph) -> u128 {
    assert!(
        g.n() <= MAX_CANON,
        "canonical forms limited to {MAX_CANON} vertices"
    );
    if g.n() == 0 {
        return 0;
    }
    let adj = bitmasks(g);
    let mut best = None;
    search(&adj, vec![(0..g.n()).collect()], &mut best);
    best.expect("search reaches at least one leaf")
}

fn independent_subsets(adj: &[u32]) -> Vec<u32> {
    fn go(adj: &[u32], next: usize, current: u32, forbidden: u32, out: &mut Vec<u32>) {
        out.push(current);
        for v in next..adj.len() {
            if forbidden >> v & 1 == 0 {
                go(
                    adj,
                    v + 1,
                    current | 1 << v,
                    forbidden | adj[v] | 1 << v,
                    out,
                );
            }
        }
    }
    let mut out = Vec::new();
    go(adj, 0, 0, 0, &mut out);
    out
}

/// Structural signature of a refined partition: per cell, its size and the
/// neighbour counts of its first vertex into every cell.
fn shape(adj: &[u32], cells: &[Vec<Vertex>]) -> Vec<(usize, Vec<u32>)> {
    let mut cell_of = vec![0usize; adj.len()];
    for (i, cell) in cells.iter().enumerate() {
        for &v in cell {
            cell_of[v] = i;
        }
    }
    cells
        .iter()
        .map(|cell| {
            let mut counts = vec![0u32; cells.len()];
            let mut bits = adj[cell[0]];
            while bits != 0 {
                counts[cell_of[bits.trailing_zeros() as usize]] += 1;
                bits &= bits - 1;
            }
            (cell.len(), counts)
        })
        .collect()
}

fn iso_search(a: &[u32], b: &[u32], cells_a: Vec<Vec<Vertex>>, cells_b: Vec<Vec<Vertex>>) -> bool {
    let ca = refine(a, cells_a);
    let cb = refine(b, cells_b);
    if shape(a, &ca) != shape(b, &cb) {
        return false;
    }
    let Some(target) = ca.iter().position(|c| c.len() > 1) else {
        let mut map = vec![0usize; a.len()];
        for (x, y) in ca.iter().zip(&cb) {
            map[x[0]] = y[0];
        }
        return (0..a.len())
            .all(|v| (0..a.len()).all(|w| (a[v] >> w & 1) == (b[map[v]] >> map[w] & 1)));
    };
    let v = ca[target][0];
    let individualise = |cells: &[Vec<Vertex>], x: Vertex| {
        let mut split = cells[..target].to_vec();
        split.push(vec![x]);
        split.push(cells[target].iter().copied().filter(|&w| w != x).collect());
        split.extend_from_slice(&cells[target + 1..]);
        split
    };
    cb[target]
        .iter()
        .any(|&w| iso_search(a, b, individualise(&ca, v), individualise(&cb, w)))
}

/// Isomorphism test by refinement-guided backtracking (stops at the first isomorphism).
pub fn isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    assert!(
        g.n() <= MAX_CANON,
        "isomorphism test limited to {MAX_CANON} vertices"
    );
    if g.n() == 0 {
        return true;
    }
    let unit: Vec<Vec<Vertex>> = vec![(0..g.n()).collect()];
    iso_search(&bitmasks(g), &bitmasks(h), unit.clone(), unit)
}

/// All triangle-free graphs on `n` vertices up to isomorphism.
///
/// Every triangle-free graph on `n` vertices is obtained from one on `n - 1`
/// vertices by adding a vertex whose neighbourhood is independent. Output
/// order is deterministic (first discovery).
pub fn triangle_free_graphs(n: usize) -> Vec<Graph> {
    generate(n, false)
}

/// Connected triangle-free graphs on `n` vertices up to isomorphism.
pub fn connected_triangle_free_graphs(n: usize) -> Vec<Graph> {
    generate(n, true)
}

type Bucket = Vec<(Vec<u32>, Graph)>;

fn generate(n: usize, connected_only: bool) -> Vec<Graph> {
    assert!(
        n <= MAX_CANON,
        "enumeration limited to {MAX_CANON} vertices"
    );
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    for size in 1..=n {
        let last = size == n;
        let mut buckets: HashMap<(usize, Vec<(usize, Vec<u32>)>), Bucket> = HashMap::new();
        let mut found = Vec::new();
        for g in &level {
            let adj = bitmasks(g);
            for subset in independent_subsets(&adj) {
                if last && connected_only && subset == 0 && size > 1 {
                    continue;
                }
                let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
                edges.extend(
                    (0..size - 1)
                        .filter(|&v| subset >> v & 1 == 1)
                        .map(|v| (v, size - 1)),
                );
                let h = Graph::from_edges(size, edges).expect("extension is simple");
                if last && connected_only && !h.is_connected() {
                    continue;
                }
                let hadj = bitmasks(&h);
                let key = (
                    h.edge_count(),
                    shape(&hadj, &refine(&hadj, vec![(0..size).collect()])),
                );
                let bucket = buckets.entry(key).or_default();
                let unit: Vec<Vec<Vertex>> = vec![(0..size).collect()];
                if bucket
                    .iter()
                    .any(|(radj, _)| iso_search(radj, &hadj, unit.clone(), unit.clone()))
                {
                    continue;
                }
                bucket.push((hadj, h.clone()));
                found.push(h);
            }
        }
        level = found;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    #[test]
    fn canonical_code_is_label_invariant() {
        let p = petersen();
        let perm = [3, 7, 1, 9, 0, 5, 2, 8, 6, 4];
        let q = Graph::from_edges(10, p.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        assert_eq!(canonical_code(&p), canonical_code(&q));
        assert_ne!(
            canonical_code(&cycle(6)),
            canonical_code(&complete_bipartite(3, 3))
        );
        assert_ne!(canonical_code(&path(4)), canonical_code(&star(3)));
    }

    #[test]
    fn decoded_code_round_trips() {
        let g = petersen();
        let c = canonical_code(&g);
        assert_eq!(canonical_code(&from_code(10, c)), c);
    }

    #[test]
    fn isomorphism_test() {
        let p = petersen();
        let perm = [3, 7, 1, 9, 0, 5, 2, 8, 6, 4];
        let q = Graph::from_edges(10, p.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
        assert!(isomorphic(&p, &q));
        assert!(!isomorphic(&cycle(6), &complete_bipartite(3, 3)));
        assert!(!isomorphic(
            &cycle(6),
            &Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap()
        ));
        assert!(isomorphic(&Graph::empty(7), &Graph::empty(7)));
    }

    #[test]
    fn small_counts() {
        // n = 4: empty, K2+2K1, 2K2, P3+K1, P4, K_{1,3}, C4
        assert_eq!(triangle_free_graphs(4).len(), 7);
        assert_eq!(connected_triangle_free_graphs(4).len(), 3);
        assert_eq!(connected_triangle_free_graphs(1).len(), 1);
        assert_eq!(connected_triangle_free_graphs(2).len(), 1);
        for g in connected_triangle_free_graphs(6) {
            assert!(g.is_connected() && g.is_triangle_free());
        }
    }
}
