//! The polymer model of a partition class: polymers are 2-linked subsets of
//! the class of bounded order, two polymers are compatible when their
//! neighbourhoods are disjoint, and a polymer weighs
//! `|I(L_G(S))| · 2^{−|N_G(S)|}`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::closed_form::gamma_k;
use crate::counting::count_independent_sets;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::matching::max_matching_size;
use crate::numeric::{self, inv_pow2, pow, rat_from_uint, rat_int, Interval, Rational};

/// A nonempty 2-linked vertex set inside one class, with its neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polymer {
    class: usize,
    vertices: Vec<usize>,
    neighborhood: Vec<usize>,
}

impl Polymer {
    /// Wraps a vertex set after checking it is a nonempty 2-linked subset of
    /// a single class.
    pub fn new(g: &Hypergraph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let class = g
            .common_class(&vertices)?
            .ok_or_else(|| Error::input("a polymer must be nonempty"))?;
        if !g.is_two_linked(&vertices) {
            return Err(Error::input("vertex set is not 2-linked"));
        }
        Ok(Self::from_parts(g, class, vertices))
    }

    fn from_parts(g: &Hypergraph, class: usize, vertices: Vec<usize>) -> Self {
        let neighborhood = g.neighborhood_unchecked(&vertices);
        Polymer {
            class,
            vertices,
            neighborhood,
        }
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// Sorted global vertex indices.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn neighborhood(&self) -> &[usize] {
        &self.neighborhood
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn compatible(&self, other: &Polymer) -> bool {
        compatible(self, other)
    }
}

/// `S ∼ T` iff `N(S) ∩ N(T) = ∅`. A polymer is never compatible with itself.
pub fn compatible(s: &Polymer, t: &Polymer) -> bool {
    if s == t {
        return false;
    }
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&s.neighborhood, &t.neighborhood);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// All 2-linked `S ⊆ Z` with `1 ≤ |S| ≤ bound` (containing `root` if
/// given), each once, sorted lexicographically by vertex list.
pub fn enumerate_polymers(
    g: &Hypergraph,
    class: usize,
    bound: usize,
    root: Option<usize>,
) -> Result<Vec<Polymer>> {
    enumerate_capped(g, class, bound, root, None)
}

pub(crate) fn enumerate_capped(
    g: &Hypergraph,
    class: usize,
    bound: usize,
    root: Option<usize>,
    cap: Option<usize>,
) -> Result<Vec<Polymer>> {
    if class >= g.k() {
        return Err(Error::input(format!("class {class} out of range")));
    }
    let zr = g.class_range(class);
    if let Some(u) = root {
        if !zr.contains(&u) {
            return Err(Error::input(format!("root {} is not in class {class}", g.vertex_id(u))));
        }
    }
    let mut sets = Vec::new();
    if bound > 0 {
        for start in zr {
            // connected sets whose least vertex is `start`
            if root.is_some_and(|u| u < start) {
                break;
            }
            let ext: Vec<usize> = g.z2_neighbors(start).iter().copied().filter(|&u| u > start).collect();
            let mut sub = vec![start];
            extend_connected(g, &mut sub, ext, start, bound, &mut sets, cap)?;
        }
    }
    let mut polymers: Vec<Polymer> = sets
        .into_iter()
        .filter(|s: &Vec<usize>| root.is_none_or(|u| s.contains(&u)))
        .map(|mut s| {
            s.sort_unstable();
            Polymer::from_parts(g, class, s)
        })
        .collect();
    polymers.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(polymers)
}

// ESU-style growth: every connected set is produced once, from its least
// vertex, by only extending with exclusive neighbours above the root.
fn extend_connected(
    g: &Hypergraph,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: usize,
    bound: usize,
    out: &mut Vec<Vec<usize>>,
    cap: Option<usize>,
) -> Result<()> {
    out.push(sub.clone());
    if let Some(cap) = cap {
        if out.len() > cap {
            return Err(Error::budget(format!("more than {cap} polymers")));
        }
    }
    if sub.len() == bound {
        return Ok(());
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in g.z2_neighbors(w) {
            if u <= root || sub.contains(&u) || u == w {
                continue;
            }
            let touches_sub = sub.iter().any(|&s| g.z2_neighbors(s).binary_search(&u).is_ok());
            if !touches_sub && !next.contains(&u) {
                next.push(u);
            }
        }
        sub.push(w);
        extend_connected(g, sub, next, root, bound, out, cap)?;
        sub.pop();
    }
    Ok(())
}

/// `w(S) = |I(L_G(S))| · 2^{−|N_G(S)|}`, exactly.
pub fn polymer_weight(g: &Hypergraph, s: &Polymer) -> Rational {
    let link = g.link_graph_unchecked(&s.vertices);
    let count = count_independent_sets(&link.to_edge_system());
    rat_from_uint(&count) * inv_pow2(s.neighborhood.len())
}

/// Read access to a polymer model for partition functions and clusters.
///
/// Every polymer is taken to be incompatible with itself; `conflicts(i)`
/// lists the *other* polymers incompatible with `i`.
pub trait PolymerSystem {
    fn polymer_count(&self) -> usize;
    fn order(&self, i: usize) -> usize;
    fn weight(&self, i: usize) -> &Rational;
    fn conflicts(&self, i: usize) -> &[usize];
}

/// The polymer model `P_{Z,b}` of one class, with weights and the
/// incompatibility lists materialised.
#[derive(Clone, Debug)]
pub struct PolymerModel {
    class: usize,
    bound: usize,
    polymers: Vec<Polymer>,
    weights: Vec<Rational>,
    conflicts: Vec<Vec<usize>>,
}

impl PolymerModel {
    pub fn new(g: &Hypergraph, class: usize, bound: usize) -> Result<Self> {
        Self::build(g, class, bound, None)
    }

    /// As [`PolymerModel::new`], refusing with a budget error when the class
    /// has more than `cap` polymers.
    pub fn with_cap(g: &Hypergraph, class: usize, bound: usize, cap: usize) -> Result<Self> {
        Self::build(g, class, bound, Some(cap))
    }

    fn build(g: &Hypergraph, class: usize, bound: usize, cap: Option<usize>) -> Result<Self> {
        let polymers = enumerate_capped(g, class, bound, None, cap)?;
        let weights = polymers.iter().map(|p| polymer_weight(g, p)).collect();
        let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, p) in polymers.iter().enumerate() {
            for &x in &p.neighborhood {
                by_vertex.entry(x).or_default().push(i);
            }
        }
        let conflicts = polymers
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut c: Vec<usize> = p
                    .neighborhood
                    .iter()
                    .flat_map(|x| by_vertex[x].iter().copied())
                    .filter(|&j| j != i)
                    .collect();
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Ok(PolymerModel {
            class,
            bound,
            polymers,
            weights,
            conflicts,
        })
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn polymers(&self) -> &[Polymer] {
        &self.polymers
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn partition_function(&self) -> Rational {
        independence_sum(self)
    }
}

impl PolymerSystem for PolymerModel {
    fn polymer_count(&self) -> usize {
        self.polymers.len()
    }

    fn order(&self, i: usize) -> usize {
        self.polymers[i].order()
    }

    fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    fn conflicts(&self, i: usize) -> &[usize] {
        &self.conflicts[i]
    }
}

/// A polymer system given directly by orders, weights and incompatible
/// pairs, with no underlying hypergraph.
#[derive(Clone, Debug)]
pub struct AbstractPolymerModel {
    orders: Vec<usize>,
    weights: Vec<Rational>,
    conflicts: Vec<Vec<usize>>,
}

impl AbstractPolymerModel {
    /// Pairs `(i, j)` with `i ≠ j` are incompatible; every polymer is
    /// incompatible with itself regardless.
    pub fn new(orders: Vec<usize>, weights: Vec<Rational>, incompatible: &[(usize, usize)]) -> Result<Self> {
        let n = orders.len();
        if weights.len() != n {
            return Err(Error::input("orders and weights differ in length"));
        }
        if orders.contains(&0) {
            return Err(Error::input("polymer orders must be positive"));
        }
        let mut conflicts = vec![Vec::new(); n];
        for &(i, j) in incompatible {
            if i >= n || j >= n {
                return Err(Error::input(format!("pair ({i}, {j}) out of range")));
            }
            if i != j {
                conflicts[i].push(j);
                conflicts[j].push(i);
            }
        }
        for c in &mut conflicts {
            c.sort_unstable();
            c.dedup();
        }
        Ok(AbstractPolymerModel {
            orders,
            weights,
            conflicts,
        })
    }

    /// Order-one polymers.
    pub fn unit_orders(weights: Vec<Rational>, incompatible: &[(usize, usize)]) -> Result<Self> {
        Self::new(vec![1; weights.len()], weights, incompatible)
    }
}

impl PolymerSystem for AbstractPolymerModel {
    fn polymer_count(&self) -> usize {
        self.orders.len()
    }

    fn order(&self, i: usize) -> usize {
        self.orders[i]
    }

    fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    fn conflicts(&self, i: usize) -> &[usize] {
        &self.conflicts[i]
    }
}

/// Exact `Ξ_{Z,b}`: the weighted sum over compatible polymer families, the
/// empty family contributing 1.
pub fn partition_function(g: &Hypergraph, class: usize, bound: usize, polymer_cap: usize) -> Result<Rational> {
    Ok(PolymerModel::with_cap(g, class, bound, polymer_cap)?.partition_function())
}

/// Weighted independence polynomial of the incompatibility graph at the
/// polymer weights, by branching with component splitting and a memo on
/// the remaining polymer set.
pub fn independence_sum<P: PolymerSystem + ?Sized>(p: &P) -> Rational {
    let n = p.polymer_count();
    let words = n.div_ceil(64).max(1);
    let mut all = vec![0u64; words];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    let masks: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut m = vec![0u64; words];
            for &j in p.conflicts(i) {
                m[j / 64] |= 1 << (j % 64);
            }
            m[i / 64] |= 1 << (i % 64);
            m
        })
        .collect();
    let mut memo = HashMap::new();
    independence_rec(p, &masks, all, &mut memo)
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let t = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(w * 64 + t)
        })
    })
}

fn independence_rec<P: PolymerSystem + ?Sized>(
    p: &P,
    masks: &[Vec<u64>],
    set: Vec<u64>,
    memo: &mut HashMap<Vec<u64>, Rational>,
) -> Rational {
    let Some(first) = members(&set).next() else {
        return Rational::one();
    };
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    // component of `first`
    let mut comp = vec![0u64; set.len()];
    comp[first / 64] |= 1 << (first % 64);
    let mut frontier = vec![first];
    while let Some(v) = frontier.pop() {
        for (w, (&m, &s)) in masks[v].iter().zip(&set).enumerate() {
            let new = m & s & !comp[w];
            if new != 0 {
                comp[w] |= new;
                frontier.extend(members(&[new]).map(|b| w * 64 + b));
            }
        }
    }
    let rest: Vec<u64> = set.iter().zip(&comp).map(|(s, c)| s & !c).collect();
    let result = if rest.iter().any(|&w| w != 0) {
        independence_rec(p, masks, comp, memo) * independence_rec(p, masks, rest, memo)
    } else {
        let pivot = members(&set)
            .max_by_key(|&v| {
                masks[v].iter().zip(&set).map(|(m, s)| (m & s).count_ones()).sum::<u32>()
            })
            .unwrap();
        let mut without = set.clone();
        without[pivot / 64] &= !(1 << (pivot % 64));
        let closed: Vec<u64> = set.iter().zip(&masks[pivot]).map(|(s, m)| s & !m).collect();
        independence_rec(p, masks, without, memo)
            + p.weight(pivot) * independence_rec(p, masks, closed, memo)
    };
    memo.insert(set, result.clone());
    result
}

/// One polymer's contribution to the Kotecký–Preiss sum.
#[derive(Clone, Debug)]
pub struct KpTerm {
    pub vertices: Vec<VertexId>,
    pub weight: Rational,
    /// `(k−1)|S|/r`
    pub f: Rational,
    /// `ln γ_k · r · ln(2|S|)`
    pub g: Interval,
    /// `w(S)·exp(f + g)`
    pub term: Interval,
}

/// Left side of the per-vertex Kotecký–Preiss sum against the `1/r³` target.
#[derive(Clone, Debug)]
pub struct KpTerms {
    pub root: VertexId,
    pub bound: usize,
    pub r: usize,
    /// Rigorous enclosure of the left side.
    pub lhs: Interval,
    pub rhs: Rational,
    /// True only when the upper end of the enclosure is at most `1/r³`.
    pub holds: bool,
    pub terms: Vec<KpTerm>,
}

impl KpTerms {
    pub fn lhs_value(&self) -> f64 {
        self.lhs.midpoint_f64()
    }
}

/// Evaluates `Σ_{S ∋ u} w(S)·exp((k−1)|S|/r + ln γ_k · r · ln(2|S|))` over
/// `P_{Z,b}` with outward rounding and compares it with `1/r³`. Requires a
/// regular hypergraph of positive degree.
pub fn kp_sum(g: &Hypergraph, root: VertexId, bound: usize, polymer_cap: usize) -> Result<KpTerms> {
    let r = g
        .regular_degree()
        .filter(|&r| r > 0)
        .ok_or_else(|| Error::input("Kotecký–Preiss sum needs a regular hypergraph of positive degree"))?;
    let u = g.global(root)?;
    let k = g.k();
    let polymers = enumerate_capped(g, root.class, bound, Some(u), Some(polymer_cap))?;
    let ln_gamma = numeric::ln(&gamma_k(k)?);
    let mut ln_two_s: HashMap<usize, Interval> = HashMap::new();
    let mut lhs = Interval::exact(Rational::zero());
    let mut terms = Vec::with_capacity(polymers.len());
    for p in &polymers {
        let s = p.order();
        let weight = polymer_weight(g, p);
        let f = Rational::new(((k - 1) * s).into(), r.into());
        let l2s = ln_two_s
            .entry(s)
            .or_insert_with(|| numeric::ln(&rat_int(2 * s as i64)))
            .clone();
        let gv = ln_gamma.mul(&l2s).scale(&rat_int(r as i64));
        let term = numeric::exp(&gv.add(&Interval::exact(f.clone()))).scale(&weight);
        lhs = lhs.add(&term);
        terms.push(KpTerm {
            vertices: g.vertex_ids(p.vertices()),
            weight,
            f,
            g: gv,
            term,
        });
    }
    let rhs = Rational::new(1.into(), (r * r * r).into());
    let holds = lhs.hi <= rhs;
    Ok(KpTerms {
        root,
        bound,
        r,
        lhs,
        rhs,
        holds,
        terms,
    })
}

/// `m(S)`, the maximum matching size of the link graph of `S`.
pub fn matching_number(g: &Hypergraph, s: &Polymer) -> usize {
    max_matching_size(&g.link_graph_unchecked(&s.vertices))
}

/// `γ_k^{−m(S)}`, the matching upper bound on `w(S)`.
pub fn matching_weight_bound(g: &Hypergraph, s: &Polymer) -> Result<Rational> {
    let gamma = gamma_k(g.k())?;
    Ok(pow(&gamma.recip(), matching_number(g, s)))
}

/// Rigorous lower end of `e · ((k−1)·e·Δ²)^{s−1} = e^s ((k−1)Δ²)^{s−1}`, the
/// bound on 2-linked sets of order `s` through a fixed vertex when every
/// vertex has degree at most `Δ`.
pub fn two_linked_count_bound(k: usize, max_degree: usize, s: usize) -> Interval {
    assert!(s >= 1);
    let e_s = numeric::exp(&Interval::exact(rat_int(s as i64)));
    let base = BigUint::from((k - 1) * max_degree * max_degree).pow(s as u32 - 1);
    e_s.scale(&rat_from_uint(&base))
}

/// Default polymer order bound `⌊β t n / log_{γ_k} n⌋`, clamped to `[t, n]`.
pub fn default_bound(k: usize, n: usize, t: usize, beta: f64) -> Result<usize> {
    let gamma = numeric::rational_to_f64(&gamma_k(k)?);
    let log_n = (n as f64).ln() / gamma.ln();
    let raw = if log_n > 0.0 {
        (beta * t as f64 * n as f64 / log_n).floor() as usize
    } else {
        n
    };
    Ok(raw.max(t).min(n.max(1)))
}
