//! Ursell function `φ(H) = (1/|V|!) Σ (−1)^{|E(F)|}` over spanning connected
//! subgraphs `F` of a connected graph `H`.
//!
//! The signed count of connected spanning subgraphs is obtained by the
//! subset recurrence
//!
//! ```text
//! A(U) = Σ_{F ⊆ E(H[U])} (−1)^{|F|} = [E(H[U]) = ∅]
//! A(U) = Σ_{W ⊆ U, min U ∈ W} C(W) · A(U ∖ W)
//! ```
//!
//! solved for `C(V)`, which costs `3^{|V|}` rather than `2^{|E|}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::{rat_int, Rational};

/// Hard ceiling on graph order regardless of the configured cap.
pub const MAX_ORDER: usize = 16;

/// Simple undirected graph on `0..n`, adjacency as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<u32>,
}

impl SmallGraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_ORDER, "small graphs hold at most {MAX_ORDER} vertices");
        SmallGraph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SmallGraph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SmallGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n, "invalid edge {a}-{b}");
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let full = (1u32 << self.n) - 1;
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == full
    }

    /// Relabelling by (degree, neighbour degree sum, index); the relabelled
    /// graph is the memo key.
    fn memo_key(&self) -> SmallGraph {
        let deg: Vec<u32> = self.adj.iter().map(|m| m.count_ones()).collect();
        let nsum: Vec<u32> = (0..self.n)
            .map(|v| (0..self.n).filter(|&u| self.has_edge(v, u)).map(|u| deg[u]).sum())
            .collect();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (deg[v], nsum[v], v));
        let mut pos = vec![0; self.n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut g = SmallGraph::new(self.n);
        for (a, b) in self.edges() {
            g.add_edge(pos[a], pos[b]);
        }
        g
    }
}

fn memo() -> &'static Mutex<HashMap<SmallGraph, Rational>> {
    static MEMO: OnceLock<Mutex<HashMap<SmallGraph, Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `φ(H)` exactly. Refuses graphs above `max_order` vertices and rejects
/// disconnected or empty graphs.
pub fn ursell(h: &SmallGraph, max_order: usize) -> Result<Rational> {
    if h.n > max_order.min(MAX_ORDER) {
        return Err(Error::budget(format!(
            "Ursell function limited to {} vertices, graph has {}",
            max_order.min(MAX_ORDER),
            h.n
        )));
    }
    if !h.is_connected() {
        return Err(Error::input("Ursell function of a disconnected graph"));
    }
    let key = h.memo_key();
    if let Some(v) = memo().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let signed = connected_signed_count(&key);
    let factorial: BigInt = (1..=h.n).map(BigInt::from).product();
    let value = Rational::new(BigInt::from(signed), factorial);
    memo().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

/// `Σ_{F spanning connected} (−1)^{|E(F)|}` via the subset recurrence.
fn connected_signed_count(h: &SmallGraph) -> i64 {
    let n = h.n;
    let size = 1usize << n;
    // A(U): 1 iff U spans no edge
    let edgeless: Vec<i64> = (0..size)
        .map(|u| {
            let u = u as u32;
            let any = (0..n).any(|v| u >> v & 1 == 1 && h.adj[v] & u != 0);
            i64::from(!any)
        })
        .collect();
    let mut conn = vec![0i64; size];
    for u in 1..size {
        let low = u & u.wrapping_neg();
        let rest = u ^ low;
        // proper subsets W of U containing the least vertex
        let mut acc = 0i64;
        let mut sub = rest;
        loop {
            let w = sub | low;
            if w != u {
                acc += conn[w] * edgeless[u ^ w];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        conn[u] = edgeless[u] - acc;
    }
    conn[size - 1]
}

/// Convenience: `φ(K_1) = 1`.
pub fn ursell_single_vertex() -> Rational {
    Rational::one()
}

/// `(−1)^{m−1}/m`, the value on the complete graph `K_m`.
pub fn ursell_complete_closed_form(m: usize) -> Rational {
    let sign = if m % 2 == 1 { 1 } else { -1 };
    Rational::new(BigInt::from(sign), BigInt::from(m)) * rat_int(1)
}
