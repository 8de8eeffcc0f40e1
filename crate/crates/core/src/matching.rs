//! Maximum matchings in small hypergraphs by branch and bound.

use crate::counting::EdgeSystem;
use crate::hypergraph::LinkGraph;

/// Size of a maximum matching (pairwise disjoint edges) of a link graph.
pub fn max_matching_size(link: &LinkGraph) -> usize {
    max_matching(&link.to_edge_system())
}

/// Size of a maximum matching of an arbitrary edge system.
///
/// Branches on the first remaining edge (take it or drop it). The greedy
/// matching seeds the incumbent; a branch is cut when even taking every
/// remaining edge, or covering every remaining vertex, cannot beat it.
pub fn max_matching(h: &EdgeSystem) -> usize {
    let edges: Vec<&[usize]> = h.edges().iter().map(Vec::as_slice).filter(|e| !e.is_empty()).collect();
    if edges.is_empty() {
        return 0;
    }
    let mut used = vec![false; h.vertex_count()];
    let mut best = 0;
    for e in &edges {
        if e.iter().all(|&v| !used[v]) {
            e.iter().for_each(|&v| used[v] = true);
            best += 1;
        }
    }
    let candidates: Vec<usize> = (0..edges.len()).collect();
    let mut search = Search {
        edges: &edges,
        best,
        seen: vec![false; h.vertex_count()],
    };
    search.run(&candidates, 0);
    search.best
}

struct Search<'a> {
    edges: &'a [&'a [usize]],
    best: usize,
    seen: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, candidates: &[usize], current: usize) {
        if candidates.is_empty() {
            self.best = self.best.max(current);
            return;
        }
        if current + self.bound(candidates) <= self.best {
            return;
        }
        let first = self.edges[candidates[0]];
        let rest = &candidates[1..];
        let disjoint: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&c| self.edges[c].iter().all(|v| !first.contains(v)))
            .collect();
        self.run(&disjoint, current + 1);
        self.run(rest, current);
    }

    fn bound(&mut self, candidates: &[usize]) -> usize {
        let min_size = candidates.iter().map(|&c| self.edges[c].len()).min().unwrap_or(1);
        let mut covered = 0;
        for &c in candidates {
            for &v in self.edges[c] {
                if !self.seen[v] {
                    self.seen[v] = true;
                    covered += 1;
                }
            }
        }
        for &c in candidates {
            for &v in self.edges[c] {
                self.seen[v] = false;
            }
        }
        candidates.len().min(covered / min_size)
    }
}
