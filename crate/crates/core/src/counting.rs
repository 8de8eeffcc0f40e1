//! Exact independent-set counting.
//!
//! [`count_independent_sets`] is a backtracking counter with connected
//! component factorisation and a memo keyed on a relabelled residual
//! hypergraph. [`count_by_filter`] is the plain `2^|V|` subset filter kept as
//! an independent cross-check for small inputs. Everything here is exact
//! integer arithmetic.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest vertex count accepted by the subset-filter routines.
pub const FILTER_MAX_VERTICES: usize = 30;

/// A plain hypergraph on `0..vertex_count`; edges may have any size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSystem {
    vertex_count: usize,
    edges: Vec<Vec<usize>>,
}

impl EdgeSystem {
    pub fn new(vertex_count: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            if let Some(v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::input(format!("edge {i}: vertex {v} out of range")));
            }
            e.sort_unstable();
            e.dedup();
            clean.push(e);
        }
        Ok(Self::from_sorted(vertex_count, clean))
    }

    pub(crate) fn from_sorted(vertex_count: usize, mut edges: Vec<Vec<usize>>) -> Self {
        edges.sort();
        edges.dedup();
        EdgeSystem {
            vertex_count,
            edges,
        }
    }

    /// Edgeless system on `m` vertices.
    pub fn empty(m: usize) -> Self {
        EdgeSystem {
            vertex_count: m,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Common edge size, if all edges have the same size.
    pub fn uniformity(&self) -> Option<usize> {
        let first = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == first).then_some(first)
    }

    pub fn without_edge(&self, idx: usize) -> EdgeSystem {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        EdgeSystem {
            vertex_count: self.vertex_count,
            edges,
        }
    }
}

/// Number of vertex subsets of `h` containing no edge.
pub fn count_independent_sets(h: &EdgeSystem) -> BigUint {
    let mut counter = Counter::default();
    let edges: Vec<Vec<u32>> = h
        .edges
        .iter()
        .map(|e| e.iter().map(|&v| v as u32).collect())
        .collect();
    counter.count(h.vertex_count, edges)
}

/// `2^|V|` subset filter. Independent of the backtracking path; use it only
/// on small inputs.
pub fn count_by_filter(h: &EdgeSystem) -> Result<BigUint> {
    if h.vertex_count > FILTER_MAX_VERTICES {
        return Err(Error::budget(format!(
            "filter count needs at most {FILTER_MAX_VERTICES} vertices, got {}",
            h.vertex_count
        )));
    }
    let masks: Vec<u64> = h
        .edges
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    let mut count = 0u64;
    for set in 0u64..(1u64 << h.vertex_count) {
        if masks.iter().all(|&m| set & m != m) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

const MEMO_CAP: usize = 1 << 16;

#[derive(Default)]
struct Counter {
    memo: HashMap<Vec<u32>, BigUint>,
}

impl Counter {
    fn count(&mut self, m: usize, edges: Vec<Vec<u32>>) -> BigUint {
        let Some((free, edges, m)) = simplify(m, edges) else {
            return BigUint::zero();
        };
        let mut total = BigUint::one() << free;
        if edges.is_empty() {
            return total;
        }
        for (cm, ce) in components(m, edges) {
            let c = self.count_connected(cm, ce);
            if c.is_zero() {
                return c;
            }
            total *= c;
        }
        total
    }

    /// Count for a connected system with no isolated vertices.
    fn count_connected(&mut self, m: usize, edges: Vec<Vec<u32>>) -> BigUint {
        let (key, edges) = canonical_key(m, edges);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let mut degree = vec![0usize; m];
        for e in &edges {
            for &v in e {
                degree[v as usize] += 1;
            }
        }
        let pivot = (0..m).max_by_key(|&v| (degree[v], std::cmp::Reverse(v))).unwrap() as u32;

        // pivot left out: edges through it can never be completed
        let excluded: Vec<Vec<u32>> = edges
            .iter()
            .filter(|e| !e.contains(&pivot))
            .cloned()
            .collect();
        // pivot taken: edges through it shrink
        let included: Vec<Vec<u32>> = edges
            .iter()
            .map(|e| e.iter().copied().filter(|&v| v != pivot).collect())
            .collect();
        let (m1, ex) = drop_vertex(m, excluded, pivot);
        let (m2, inc) = drop_vertex(m, included, pivot);
        let result = self.count(m1, ex) + self.count(m2, inc);

        if self.memo.len() >= MEMO_CAP {
            self.memo.clear();
        }
        self.memo.insert(key, result.clone());
        result
    }
}

fn drop_vertex(m: usize, edges: Vec<Vec<u32>>, gone: u32) -> (usize, Vec<Vec<u32>>) {
    let edges = edges
        .into_iter()
        .map(|e| e.into_iter().map(|v| if v > gone { v - 1 } else { v }).collect())
        .collect();
    (m - 1, edges)
}

/// Applies forced exclusions (size-1 edges), removes superset edges and
/// isolated vertices. Returns `(isolated count, edges, remaining vertices)`
/// with vertices compacted, or `None` if an empty edge makes the count 0.
fn simplify(m: usize, mut edges: Vec<Vec<u32>>) -> Option<(usize, Vec<Vec<u32>>, usize)> {
    let mut forbidden = vec![false; m];
    loop {
        let mut changed = false;
        for e in &edges {
            match e.len() {
                0 => return None,
                1 if !forbidden[e[0] as usize] => {
                    forbidden[e[0] as usize] = true;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
        // an excluded vertex satisfies every edge through it
        edges.retain(|e| !e.iter().any(|&v| forbidden[v as usize]));
    }
    for e in edges.iter_mut() {
        e.sort_unstable();
    }
    edges.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    edges.dedup();
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
    for e in edges {
        if !kept.iter().any(|k| is_subset(k, &e)) {
            kept.push(e);
        }
    }

    let mut used = vec![false; m];
    for e in &kept {
        for &v in e {
            used[v as usize] = true;
        }
    }
    let mut relabel = vec![u32::MAX; m];
    let mut next = 0u32;
    let mut free = 0usize;
    for v in 0..m {
        if used[v] {
            relabel[v] = next;
            next += 1;
        } else if !forbidden[v] {
            free += 1;
        }
    }
    let kept = kept
        .into_iter()
        .map(|e| e.into_iter().map(|v| relabel[v as usize]).collect())
        .collect();
    Some((free, kept, next as usize))
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

fn components(m: usize, edges: Vec<Vec<u32>>) -> Vec<(usize, Vec<Vec<u32>>)> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &edges {
        let a = find(&mut parent, e[0] as usize);
        for &v in &e[1..] {
            let b = find(&mut parent, v as usize);
            if a != b {
                parent[b] = a;
            }
        }
    }
    let mut comp_of = vec![usize::MAX; m];
    let mut local = vec![0u32; m];
    let mut sizes: Vec<usize> = Vec::new();
    for v in 0..m {
        let root = find(&mut parent, v);
        if comp_of[root] == usize::MAX {
            comp_of[root] = sizes.len();
            sizes.push(0);
        }
        let c = comp_of[root];
        comp_of[v] = c;
        local[v] = sizes[c] as u32;
        sizes[c] += 1;
    }
    let mut out: Vec<(usize, Vec<Vec<u32>>)> = sizes.iter().map(|&s| (s, Vec::new())).collect();
    for e in edges {
        let c = comp_of[e[0] as usize];
        out[c].1.push(e.into_iter().map(|v| local[v as usize]).collect());
    }
    out
}

/// Relabels vertices by a colour-refinement ordering and returns the
/// flattened relabelled edge list as memo key, together with the relabelled
/// edges. Equal keys mean identical labelled hypergraphs, so a memo hit is
/// always sound even when the ordering is not a true canonical form.
fn canonical_key(m: usize, edges: Vec<Vec<u32>>) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mut colour: Vec<u64> = vec![0; m];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incident[v as usize].push(i);
        }
    }
    for v in 0..m {
        let mut sizes: Vec<usize> = incident[v].iter().map(|&i| edges[i].len()).collect();
        sizes.sort_unstable();
        colour[v] = hash_of(&sizes);
    }
    for _ in 0..3 {
        let next: Vec<u64> = (0..m)
            .map(|v| {
                let mut sig: Vec<Vec<u64>> = incident[v]
                    .iter()
                    .map(|&i| {
                        let mut c: Vec<u64> = edges[i]
                            .iter()
                            .filter(|&&u| u as usize != v)
                            .map(|&u| colour[u as usize])
                            .collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                sig.sort();
                hash_of(&(colour[v], sig))
            })
            .collect();
        colour = next;
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| (colour[v], v));
    let mut relabel = vec![0u32; m];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new as u32;
    }
    let mut relabelled: Vec<Vec<u32>> = edges
        .into_iter()
        .map(|e| {
            let mut e: Vec<u32> = e.into_iter().map(|v| relabel[v as usize]).collect();
            e.sort_unstable();
            e
        })
        .collect();
    relabelled.sort();
    let mut key = Vec::with_capacity(relabelled.iter().map(|e| e.len() + 1).sum::<usize>() + 1);
    key.push(m as u32);
    for e in &relabelled {
        key.push(u32::MAX);
        key.extend_from_slice(e);
    }
    (key, relabelled)
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Independent sets whose defect-class intersection has all `Z₂` components
/// of order at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectClassCount {
    pub class: usize,
    pub bound: usize,
    pub count: BigUint,
}

/// Counts independent sets `I` of `g` such that every connected component of
/// `Z₂[I ∩ Z]` has order at most `bound`, by direct enumeration of defect
/// sets and their completions. Refuses graphs above `max_vertices`.
pub fn count_with_defect_class(
    g: &Hypergraph,
    class: usize,
    bound: usize,
    max_vertices: usize,
) -> Result<DefectClassCount> {
    if class >= g.k() {
        return Err(Error::input(format!("class {class} out of range")));
    }
    let cap = max_vertices.min(FILTER_MAX_VERTICES);
    if g.num_vertices() > cap {
        return Err(Error::budget(format!(
            "defect-class enumeration limited to {cap} vertices, hypergraph has {}",
            g.num_vertices()
        )));
    }
    let zr = g.class_range(class);
    let z_len = zr.len();
    // outside vertices get their own bit positions
    let outside: Vec<usize> = (0..g.num_vertices()).filter(|v| !zr.contains(v)).collect();
    let mut out_bit = vec![usize::MAX; g.num_vertices()];
    for (i, &v) in outside.iter().enumerate() {
        out_bit[v] = i;
    }
    // each edge: its Z vertex and the mask of its outside vertices
    let edge_parts: Vec<(usize, u64)> = g
        .edges()
        .iter()
        .map(|e| {
            let z = e[class] - zr.start;
            let m = e
                .iter()
                .filter(|&&v| !zr.contains(&v))
                .fold(0u64, |m, &v| m | (1 << out_bit[v]));
            (z, m)
        })
        .collect();
    let z2_masks: Vec<u64> = zr
        .clone()
        .map(|v| {
            g.z2_neighbors(v)
                .iter()
                .fold(0u64, |m, &u| m | (1 << (u - zr.start)))
        })
        .collect();

    let mut total = BigUint::zero();
    for t in 0u64..(1u64 << z_len) {
        if largest_component(t, &z2_masks) > bound {
            continue;
        }
        let active: Vec<u64> = edge_parts
            .iter()
            .filter(|(z, _)| t >> z & 1 == 1)
            .map(|&(_, m)| m)
            .collect();
        let mut c = 0u64;
        for u in 0u64..(1u64 << outside.len()) {
            if active.iter().all(|&m| u & m != m) {
                c += 1;
            }
        }
        total += c;
    }
    Ok(DefectClassCount {
        class,
        bound,
        count: total,
    })
}

fn largest_component(set: u64, adj: &[u64]) -> usize {
    let mut remaining = set;
    let mut best = 0;
    while remaining != 0 {
        let start = remaining.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & set & !comp;
            comp |= new;
            frontier |= new;
        }
        best = best.max(comp.count_ones() as usize);
        remaining &= !comp;
    }
    best
}

/// Number of independent sets `I` with `I ∩ Z = T`, via
/// `|I(L_G(T))| · 2^{|V ∖ Z| − |N(T)|}`.
pub fn count_completions(g: &Hypergraph, class: usize, defect: &[usize]) -> Result<BigUint> {
    if class >= g.k() {
        return Err(Error::input(format!("class {class} out of range")));
    }
    let zr = g.class_range(class);
    if let Some(v) = defect.iter().find(|v| !zr.contains(v)) {
        return Err(Error::input(format!("vertex {v} is not in class {class}")));
    }
    let outside = g.num_vertices() - zr.len();
    let result = if defect.is_empty() {
        BigUint::one() << outside
    } else {
        let link = g.link_graph_unchecked(defect);
        let free = outside - link.vertices().len();
        count_independent_sets(&link.to_edge_system()) << free
    };
    if cfg!(debug_assertions) && g.num_vertices() <= 16 {
        debug_assert_eq!(result, completions_by_filter(g, class, defect));
    }
    Ok(result)
}

fn completions_by_filter(g: &Hypergraph, class: usize, defect: &[usize]) -> BigUint {
    let zr = g.class_range(class);
    let mut fixed = 0u64;
    for &v in defect {
        fixed |= 1 << v;
    }
    let free: Vec<usize> = (0..g.num_vertices()).filter(|v| !zr.contains(v)).collect();
    let masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    let mut count = 0u64;
    for sub in 0u64..(1u64 << free.len()) {
        let mut set = fixed;
        for (i, &v) in free.iter().enumerate() {
            if sub >> i & 1 == 1 {
                set |= 1 << v;
            }
        }
        if masks.iter().all(|&m| set & m != m) {
            count += 1;
        }
    }
    BigUint::from(count)
}
