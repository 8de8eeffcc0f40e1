//! Small hand-built instances, chiefly a loose 4-cycle in which two
//! `Z₂`-adjacent vertices share two neighbours.

use crate::hypergraph::{Hypergraph, VertexId};

/// A linear k-graph containing the loose 4-cycle `a, c, d, b` with
/// `a ∩ c = {x}`, `c ∩ d = {u}`, `d ∩ b = {y}`, `b ∩ a = {v}`, where `v, u`
/// lie in class 0, `x` in class 1 and `y` in class `y_class` (2 or more).
/// `padding` disjoint edges on fresh vertices are appended.
///
/// `v = 0:0` and `u = 0:1` then have the common neighbours `x` and `y`.
pub fn loose_four_cycle(k: usize, y_class: usize, padding: usize) -> Hypergraph {
    assert!(k >= 3 && (2..k).contains(&y_class), "need k ≥ 3 and 2 ≤ y_class < k");
    let mut next = vec![0usize; k];
    let mut fresh = |c: usize| {
        let v = VertexId::new(c, next[c]);
        next[c] += 1;
        v
    };
    let v = fresh(0);
    let u = fresh(0);
    let x = fresh(1);
    let y = fresh(y_class);
    let edge = |fixed: &[VertexId], fresh: &mut dyn FnMut(usize) -> VertexId| -> Vec<VertexId> {
        (0..k)
            .map(|c| fixed.iter().copied().find(|w| w.class == c).unwrap_or_else(|| fresh(c)))
            .collect()
    };
    let mut edges = vec![
        edge(&[v, x], &mut fresh),
        edge(&[u, x], &mut fresh),
        edge(&[u, y], &mut fresh),
        edge(&[v, y], &mut fresh),
    ];
    for _ in 0..padding {
        edges.push(edge(&[], &mut fresh));
    }
    Hypergraph::new(k, next, edges).expect("gadget is a valid hypergraph")
}
