use std::collections::BTreeMap;

use crate::graph::{Graph, Vertex};

use super::ConstructionError;

/// `colour[u] ∈ lists[u]` and adjacent vertices differ.
pub fn is_proper_list_colouring<L: PartialEq>(g: &Graph, lists: &[Vec<L>], colour: &[L]) -> bool {
    colour.len() == g.n()
        && (0..g.n()).all(|u| lists[u].contains(&colour[u]))
        && g.edges().all(|(u, v)| colour[u] != colour[v])
}

struct Search<'g> {
    g: &'g Graph,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Assigns `u := c` and propagates forced (singleton) domains.
    /// Returns `false` on a wipe-out.
    fn assign(
        &self,
        domains: &mut [Vec<usize>],
        assigned: &mut [Option<usize>],
        u: Vertex,
        c: usize,
    ) -> bool {
        let mut queue = vec![(u, c)];
        while let Some((u, c)) = queue.pop() {
            match assigned[u] {
                Some(x) if x == c => continue,
                Some(_) => return false,
                None => {}
            }
            if !domains[u].contains(&c) {
                return false;
            }
            assigned[u] = Some(c);
            domains[u] = vec![c];
            for &w in self.g.neighbours(u) {
                if assigned[w] == Some(c) {
                    return false;
                }
                if assigned[w].is_none() {
                    domains[w].retain(|&x| x != c);
                    match domains[w].len() {
                        0 => return false,
                        1 => queue.push((w, domains[w][0])),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn go(
        &mut self,
        domains: Vec<Vec<usize>>,
        assigned: Vec<Option<usize>>,
    ) -> Result<Option<Vec<usize>>, ConstructionError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ConstructionError::Budget(self.budget));
        }
        let next = (0..self.g.n())
            .filter(|&u| assigned[u].is_none())
            .min_by(|&u, &w| {
                // smallest domain per unit of degree first
                let (du, dw) = (self.g.degree(u).max(1), self.g.degree(w).max(1));
                (domains[u].len() * dw)
                    .cmp(&(domains[w].len() * du))
                    .then(u.cmp(&w))
            });
        let Some(u) = next else {
            return Ok(Some(
                assigned
                    .into_iter()
                    .map(|c| c.expect("all assigned"))
                    .collect(),
            ));
        };
        for &c in &domains[u] {
            let mut d = domains.clone();
            let mut a = assigned.clone();
            if self.assign(&mut d, &mut a, u, c) {
                if let Some(found) = self.go(d, a)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }
}

/// Exhaustive backtracking for a proper list colouring with singleton
/// propagation, branching on the vertex minimising domain size over degree.
/// `Ok(None)` means no colouring exists; more than `budget` search nodes is
/// an error.
pub fn find_list_colouring<L: Ord + Clone>(
    g: &Graph,
    lists: &[Vec<L>],
    budget: u64,
) -> Result<Option<Vec<L>>, ConstructionError> {
    if lists.len() != g.n() {
        return Err(ConstructionError::LengthMismatch {
            expected: g.n(),
            found: lists.len(),
        });
    }
    let mut ids: BTreeMap<&L, usize> = BTreeMap::new();
    for l in lists.iter().flatten() {
        let next = ids.len();
        ids.entry(l).or_insert(next);
    }
    let labels: Vec<L> = {
        let mut v: Vec<(usize, &L)> = ids.iter().map(|(l, &i)| (i, *l)).collect();
        v.sort();
        v.into_iter().map(|(_, l)| l.clone()).collect()
    };
    let mut domains: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| {
            let mut d: Vec<usize> = l.iter().map(|x| ids[x]).collect();
            d.sort_unstable();
            d.dedup();
            d
        })
        .collect();
    let mut assigned = vec![None; g.n()];
    let mut search = Search {
        g,
        nodes: 0,
        budget,
    };
    if domains.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    for u in 0..g.n() {
        if domains[u].len() == 1 && assigned[u].is_none() {
            let c = domains[u][0];
            if !search.assign(&mut domains, &mut assigned, u, c) {
                return Ok(None);
            }
        }
    }
    Ok(search
        .go(domains, assigned)?
        .map(|cs| cs.into_iter().map(|c| labels[c].clone()).collect()))
}
