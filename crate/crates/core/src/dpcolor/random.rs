use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::Cover;

/// A random cover with `size` colour nodes per vertex.
///
/// Base edges are processed in lexicographic order; for each, a random
/// pairing of the two lists is drawn and each pair becomes a cross edge with
/// probability `density`, unless an end already has star degree `max_star`.
/// The result always satisfies the cover axioms.
pub fn random_cover(g: &Graph, size: usize, max_star: usize, density: f64, seed: u64) -> Cover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let owner: Vec<usize> = (0..g.n())
        .flat_map(|u| std::iter::repeat_n(u, size))
        .collect();
    let mut star = vec![0usize; owner.len()];
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let mut targets: Vec<usize> = (v * size..(v + 1) * size).collect();
        targets.shuffle(&mut rng);
        for (a, b) in (u * size..(u + 1) * size).zip(targets) {
            if rng.random_bool(density) && star[a] < max_star && star[b] < max_star {
                star[a] += 1;
                star[b] += 1;
                edges.push((a, b));
            }
        }
    }
    Cover::new(g.clone(), owner, edges).expect("ids are in range")
}

/// `size` distinct labels per vertex, drawn uniformly from `0..palette`, sorted.
pub fn random_list_assignment(g: &Graph, size: usize, palette: u32, seed: u64) -> Vec<Vec<u32>> {
    assert!(
        size as u64 <= palette as u64,
        "list size exceeds the palette"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<u32> = (0..palette).collect();
    (0..g.n())
        .map(|_| {
            let mut list: Vec<u32> = all.choose_multiple(&mut rng, size).copied().collect();
            list.sort_unstable();
            list
        })
        .collect()
}
