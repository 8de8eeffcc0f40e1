//! k-partite k-uniform hypergraphs and the structural primitives the polymer
//! model is built from: neighbourhoods, link graphs, the same-class auxiliary
//! graph `Z₂`, 2-linked components, linearity, regularity and loose cycles.
//!
//! Vertices are stored under a global index that is class-major: class `c`
//! owns the contiguous range `offset(c)..offset(c + 1)`. Because every edge
//! meets each class exactly once, sorting an edge by global index also sorts
//! it by class.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::counting::EdgeSystem;
use crate::error::{Error, Result};

/// A vertex named by its partition class and its index inside that class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub class: usize,
    pub index: usize,
}

impl VertexId {
    pub fn new(class: usize, index: usize) -> Self {
        VertexId { class, index }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.class, self.index)
    }
}

/// Immutable k-partite k-uniform hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    class_sizes: Vec<usize>,
    offsets: Vec<usize>,
    class_of: Vec<usize>,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
    z2: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, validating k-partiteness, vertex ranges and edge
    /// distinctness. Edges are canonicalised (sorted) so that two inputs
    /// listing the same edge set produce identical hypergraphs.
    pub fn new(k: usize, class_sizes: Vec<usize>, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("uniformity must be at least 2, got {k}")));
        }
        if class_sizes.len() != k {
            return Err(Error::input(format!(
                "expected {k} class sizes, got {}",
                class_sizes.len()
            )));
        }
        if let Some(c) = class_sizes.iter().position(|&s| s == 0) {
            return Err(Error::input(format!("class {c} is empty")));
        }
        let mut offsets = Vec::with_capacity(k + 1);
        offsets.push(0);
        for &s in &class_sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        let n_total = offsets[k];
        let mut class_of = Vec::with_capacity(n_total);
        for (c, &s) in class_sizes.iter().enumerate() {
            class_of.extend(std::iter::repeat_n(c, s));
        }

        let mut global_edges = Vec::with_capacity(edges.len());
        for (i, edge) in edges.iter().enumerate() {
            if edge.len() != k {
                return Err(Error::input(format!(
                    "edge {i} has {} vertices, expected {k}",
                    edge.len()
                )));
            }
            let mut seen = vec![false; k];
            let mut g = Vec::with_capacity(k);
            for v in edge {
                if v.class >= k || v.index >= class_sizes[v.class] {
                    return Err(Error::input(format!("edge {i}: vertex {v} out of range")));
                }
                if seen[v.class] {
                    return Err(Error::input(format!(
                        "edge {i} meets class {} twice",
                        v.class
                    )));
                }
                seen[v.class] = true;
                g.push(offsets[v.class] + v.index);
            }
            g.sort_unstable();
            global_edges.push(g);
        }
        global_edges.sort();
        if let Some(w) = global_edges.windows(2).find(|w| w[0] == w[1]) {
            let names: Vec<String> = w[0]
                .iter()
                .map(|&v| VertexId::new(class_of[v], v - offsets[class_of[v]]).to_string())
                .collect();
            return Err(Error::input(format!("duplicate edge {{{}}}", names.join(" "))));
        }

        let mut incidence = vec![Vec::new(); n_total];
        for (ei, e) in global_edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(ei);
            }
        }

        let mut g = Hypergraph {
            k,
            class_sizes,
            offsets,
            class_of,
            edges: global_edges,
            incidence,
            z2: Vec::new(),
        };
        g.z2 = (0..n_total).map(|v| g.compute_z2(v)).collect();
        Ok(g)
    }

    fn compute_z2(&self, v: usize) -> Vec<usize> {
        let class = self.class_of[v];
        let mut out = BTreeSet::new();
        for &ei in &self.incidence[v] {
            for &x in &self.edges[ei] {
                if x == v {
                    continue;
                }
                for &fi in &self.incidence[x] {
                    let u = self.edges[fi][class];
                    if u != v {
                        out.insert(u);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.class_sizes[class]
    }

    pub fn num_vertices(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted global vertex indices, in canonical order.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Indices of the edges containing global vertex `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Global index range of a partition class.
    pub fn class_range(&self, class: usize) -> Range<usize> {
        self.offsets[class]..self.offsets[class + 1]
    }

    pub fn has_equal_class_sizes(&self) -> bool {
        self.class_sizes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn global(&self, v: VertexId) -> Result<usize> {
        if v.class >= self.k || v.index >= self.class_sizes[v.class] {
            return Err(Error::input(format!("vertex {v} out of range")));
        }
        Ok(self.offsets[v.class] + v.index)
    }

    pub fn vertex_id(&self, v: usize) -> VertexId {
        let c = self.class_of[v];
        VertexId::new(c, v - self.offsets[c])
    }

    pub fn vertex_ids(&self, vs: &[usize]) -> Vec<VertexId> {
        vs.iter().map(|&v| self.vertex_id(v)).collect()
    }

    pub fn globals(&self, vs: &[VertexId]) -> Result<Vec<usize>> {
        vs.iter().map(|&v| self.global(v)).collect()
    }

    fn check_range(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&v| v >= self.num_vertices()) {
            Some(v) => Err(Error::input(format!("vertex index {v} out of range"))),
            None => Ok(()),
        }
    }

    /// Returns the single class containing every vertex of `set`, or an input
    /// error if the set spans several classes. `None` for the empty set.
    pub fn common_class(&self, set: &[usize]) -> Result<Option<usize>> {
        self.check_range(set)?;
        let mut class = None;
        for &v in set {
            match class {
                None => class = Some(self.class_of[v]),
                Some(c) if c != self.class_of[v] => {
                    return Err(Error::input("vertex set spans several partition classes"))
                }
                _ => {}
            }
        }
        Ok(class)
    }

    /// `N(S)`: vertices of edges meeting `S`, minus `S` itself. Sorted.
    pub fn neighborhood(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_range(set)?;
        Ok(self.neighborhood_unchecked(set))
    }

    pub(crate) fn neighborhood_unchecked(&self, set: &[usize]) -> Vec<usize> {
        let in_set: HashSet<usize> = set.iter().copied().collect();
        let mut out = BTreeSet::new();
        for &v in set {
            for &ei in &self.incidence[v] {
                out.extend(self.edges[ei].iter().filter(|x| !in_set.contains(x)));
            }
        }
        out.into_iter().collect()
    }

    /// The (k−1)-uniform link graph of a nonempty single-class set `S`, with
    /// edges `e ∖ S` for every edge meeting `S`. Repeated residues collapse.
    pub fn link_graph(&self, set: &[usize]) -> Result<LinkGraph> {
        if set.is_empty() {
            return Err(Error::input("link graph of the empty set"));
        }
        self.common_class(set)?;
        Ok(self.link_graph_unchecked(set))
    }

    pub(crate) fn link_graph_unchecked(&self, set: &[usize]) -> LinkGraph {
        let in_set: HashSet<usize> = set.iter().copied().collect();
        let mut edges = BTreeSet::new();
        for &v in set {
            for &ei in &self.incidence[v] {
                let residue: Vec<usize> = self.edges[ei]
                    .iter()
                    .copied()
                    .filter(|x| !in_set.contains(x))
                    .collect();
                edges.insert(residue);
            }
        }
        let edges: Vec<Vec<usize>> = edges.into_iter().collect();
        let vertices: BTreeSet<usize> = edges.iter().flatten().copied().collect();
        LinkGraph {
            uniformity: self.k - 1,
            vertices: vertices.into_iter().collect(),
            edges,
        }
    }

    /// Same-class vertices sharing at least one neighbour with `v`. Loopless.
    pub fn z2_neighbors(&self, v: usize) -> &[usize] {
        &self.z2[v]
    }

    /// Splits a single-class set into the vertex sets of the connected
    /// components of the induced `Z₂` graph. Components come out sorted, in
    /// order of their least vertex.
    pub fn two_linked_components(&self, set: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.common_class(set)?;
        let members: BTreeSet<usize> = set.iter().copied().collect();
        let mut seen: HashSet<usize> = HashSet::new();
        let mut out = Vec::new();
        for &start in &members {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &self.z2[v] {
                    if members.contains(&u) && seen.insert(u) {
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        if cfg!(debug_assertions) {
            let hoods: Vec<Vec<usize>> = out.iter().map(|c| self.neighborhood_unchecked(c)).collect();
            for (i, a) in hoods.iter().enumerate() {
                for b in &hoods[i + 1..] {
                    debug_assert!(
                        a.iter().all(|x| b.binary_search(x).is_err()),
                        "2-linked components with overlapping neighbourhoods"
                    );
                }
            }
        }
        Ok(out)
    }

    /// Whether a nonempty single-class set induces a connected `Z₂` subgraph.
    pub fn is_two_linked(&self, set: &[usize]) -> bool {
        !set.is_empty() && matches!(self.two_linked_components(set), Ok(c) if c.len() == 1)
    }

    /// Every pair of distinct edges shares at most one vertex.
    pub fn is_linear(&self) -> bool {
        for (ei, e) in self.edges.iter().enumerate() {
            let mut met: HashSet<usize> = HashSet::new();
            for &v in e {
                for &fi in &self.incidence[v] {
                    if fi > ei && !met.insert(fi) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `Some(r)` if every vertex lies in exactly `r` edges.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.incidence.first()?.len();
        self.incidence
            .iter()
            .all(|inc| inc.len() == first)
            .then_some(first)
    }

    /// Searches for a loose cycle of length between 3 and `max_len`.
    ///
    /// Each cycle is visited from its least-index edge in one orientation
    /// only. The search gives up after `node_cap` DFS nodes and reports
    /// that distinctly from a negative answer.
    pub fn girth_at_most(&self, max_len: usize, node_cap: u64) -> Result<GirthSearch> {
        if max_len < 3 {
            return Err(Error::input(format!("cycle length bound must be ≥ 3, got {max_len}")));
        }
        let mut search = LooseCycleSearch::new(self, max_len, node_cap);
        for e1 in 0..self.edges.len() {
            if let Some(result) = search.search_from(e1, true) {
                return Ok(result);
            }
        }
        Ok(GirthSearch::Absent)
    }

    /// Searches for a loose cycle of length at most `max_len` passing through
    /// the given edge.
    pub fn loose_cycle_through(&self, edge: usize, max_len: usize, node_cap: u64) -> GirthSearch {
        if max_len < 3 || edge >= self.edges.len() {
            return GirthSearch::Absent;
        }
        let mut search = LooseCycleSearch::new(self, max_len, node_cap);
        search.search_from(edge, false).unwrap_or(GirthSearch::Absent)
    }

    /// The hypergraph as a plain edge system on its global vertex indices.
    pub fn to_edge_system(&self) -> EdgeSystem {
        EdgeSystem::from_sorted(self.num_vertices(), self.edges.clone())
    }

    /// The same hypergraph with some edges removed (by index).
    pub fn without_edges(&self, removed: &[usize]) -> Hypergraph {
        let drop: HashSet<usize> = removed.iter().copied().collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, e)| self.vertex_ids(e))
            .collect();
        Hypergraph::new(self.k, self.class_sizes.clone(), edges).expect("subgraph of a valid hypergraph")
    }
}

/// Outcome of a bounded loose-cycle search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GirthSearch {
    /// A loose cycle: `(k−1)ℓ` distinct vertices, consecutive windows of `k`
    /// (cyclically) forming the edges.
    Found(Vec<VertexId>),
    Absent,
    /// The node budget ran out before the search space was exhausted.
    Indeterminate { nodes: u64 },
}

impl GirthSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, GirthSearch::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, GirthSearch::Absent)
    }
}

struct LooseCycleSearch<'a> {
    g: &'a Hypergraph,
    max_len: usize,
    node_cap: u64,
    nodes: u64,
    used: Vec<bool>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    connectors: Vec<usize>,
}

impl<'a> LooseCycleSearch<'a> {
    fn new(g: &'a Hypergraph, max_len: usize, node_cap: u64) -> Self {
        LooseCycleSearch {
            g,
            max_len,
            node_cap,
            nodes: 0,
            used: vec![false; g.num_vertices()],
            on_path: vec![false; g.num_edges()],
            path: Vec::new(),
            connectors: Vec::new(),
        }
    }

    /// `canonical`: require the start edge to be the least-index edge of the
    /// cycle and fix the orientation.
    fn search_from(&mut self, e1: usize, canonical: bool) -> Option<GirthSearch> {
        let edge = self.g.edges[e1].clone();
        for &x0 in &edge {
            for &x1 in &edge {
                if x0 == x1 {
                    continue;
                }
                self.path = vec![e1];
                self.connectors = vec![x0, x1];
                self.on_path[e1] = true;
                for &v in &edge {
                    self.used[v] = true;
                }
                let r = self.extend(x1, canonical);
                for &v in &edge {
                    self.used[v] = false;
                }
                self.on_path[e1] = false;
                if r.is_some() {
                    return r;
                }
            }
        }
        None
    }

    fn extend(&mut self, x: usize, canonical: bool) -> Option<GirthSearch> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Some(GirthSearch::Indeterminate { nodes: self.nodes });
        }
        let e1 = self.path[0];
        let x0 = self.connectors[0];
        let len = self.path.len();
        for &e in self.g.incident(x) {
            if self.on_path[e] || (canonical && e < e1) {
                continue;
            }
            let edge = &self.g.edges[e];
            let mut closes = false;
            let mut clash = false;
            for &v in edge {
                if v == x || !self.used[v] {
                    continue;
                }
                if v == x0 {
                    closes = true;
                } else {
                    clash = true;
                }
            }
            if clash {
                continue;
            }
            if closes {
                let oriented = !canonical || self.path[1] < e;
                if len + 1 >= 3 && oriented {
                    self.path.push(e);
                    let witness = self.witness();
                    self.path.pop();
                    return Some(GirthSearch::Found(witness));
                }
                continue;
            }
            if len + 1 >= self.max_len {
                continue;
            }
            let edge = edge.clone();
            self.on_path[e] = true;
            self.path.push(e);
            for &v in &edge {
                self.used[v] = true;
            }
            for &y in &edge {
                if y == x {
                    continue;
                }
                self.connectors.push(y);
                let r = self.extend(y, canonical);
                self.connectors.pop();
                if r.is_some() {
                    for &v in &edge {
                        if v != x {
                            self.used[v] = false;
                        }
                    }
                    self.path.pop();
                    self.on_path[e] = false;
                    return r;
                }
            }
            for &v in &edge {
                if v != x {
                    self.used[v] = false;
                }
            }
            self.path.pop();
            self.on_path[e] = false;
        }
        None
    }

    fn witness(&self) -> Vec<VertexId> {
        let l = self.path.len();
        let mut seq = Vec::with_capacity(l * (self.g.k - 1));
        for i in 0..l {
            let a = self.connectors[i];
            let b = if i + 1 < l { self.connectors[i + 1] } else { self.connectors[0] };
            seq.push(a);
            seq.extend(self.g.edges[self.path[i]].iter().filter(|&&v| v != a && v != b));
        }
        self.g.vertex_ids(&seq)
    }
}

/// Link graph `L_G(S)` on `N_G(S)`, edges given in global vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    uniformity: usize,
    vertices: Vec<usize>,
    edges: Vec<Vec<usize>>,
}

impl LinkGraph {
    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Relabels onto `0..|N(S)|` for counting and matching.
    pub fn to_edge_system(&self) -> EdgeSystem {
        let local = |v: &usize| self.vertices.binary_search(v).expect("edge vertex in vertex set");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(local).collect())
            .collect();
        EdgeSystem::from_sorted(self.vertices.len(), edges)
    }
}
