//! Deterministic test-graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, Vertex};

fn build(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Graph {
    Graph::from_edges(n, edges).expect("generator produces a simple graph")
}

/// Cycle `C_n` (`n >= 3`); smaller `n` give a path.
pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    build(k + 1, (1..=k).map(|i| (0, i)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
}

/// Petersen graph: outer cycle `0..5`, spokes `i - i+5`, inner pentagram.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

/// Binomial random graph `G(n, p)`, pairs visited in lexicographic order.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// `G(n, p)` with every triangle destroyed.
///
/// Triples `a < b < c` are scanned lexicographically; whenever one still
/// spans a triangle its lowest edge `ab` is deleted.
pub fn random_triangle_free(n: usize, p: f64, seed: u64) -> Graph {
    let g = random_graph(n, p, seed);
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if adj[a][c] && adj[b][c] {
                    adj[a][b] = false;
                    adj[b][a] = false;
                    break;
                }
            }
        }
    }
    build(
        n,
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| adj[u][v]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        let c5 = cycle(5);
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        assert!(c5.degrees().iter().all(|&d| d == 2));
        assert_eq!(star(3).degrees(), vec![3, 1, 1, 1]);
        assert_eq!(complete_bipartite(2, 3).edge_count(), 6);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn random_triangle_free_is_triangle_free_and_deterministic() {
        let g = random_triangle_free(50, 0.1, 1);
        assert!(g.is_triangle_free());
        assert_eq!(g, random_triangle_free(50, 0.1, 1));
        for seed in 0..10 {
            assert!(random_triangle_free(30, 0.5, seed).is_triangle_free());
        }
    }

    #[test]
    fn triangle_destruction_keeps_triangle_free_edges() {
        // edges of G(n,p) on no triangle survive
        let g = random_graph(25, 0.2, 3);
        let t = random_triangle_free(25, 0.2, 3);
        for (u, v) in g.edges() {
            let in_triangle = g.neighbours(u).iter().any(|&w| g.has_edge(v, w));
            if !in_triangle {
                assert!(t.has_edge(u, v));
            }
        }
        assert!(t.edges().all(|(u, v)| g.has_edge(u, v)));
    }
}
