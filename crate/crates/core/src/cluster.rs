//! Cluster enumeration, cluster weights, the truncated cluster expansion of
//! `log Ξ` and the log-domain count estimate built from it.
//!
//! Clusters are stored as canonical multisets of polymer indices. Since every
//! polymer is incompatible with itself, `H_Γ` is connected exactly when the
//! set of distinct polymers is connected in the incompatibility graph, so
//! enumeration grows connected polymer sets (one root per set, ESU style)
//! and then distributes multiplicities within the size budget.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::numeric::{pow, rational_to_f64, LogNumber, Rational};
use crate::polymer::{independence_sum, PolymerModel, PolymerSystem};
use crate::ursell::{ursell, SmallGraph, MAX_ORDER};

/// A cluster as a multiset of polymer indices of some [`PolymerSystem`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cluster {
    /// `(polymer index, multiplicity)`, sorted by index.
    entries: Vec<(usize, usize)>,
    length: usize,
    size: usize,
    ordering_count: BigUint,
}

impl Cluster {
    /// Builds a cluster from `(index, multiplicity)` pairs, checking that
    /// `H_Γ` is connected.
    pub fn new<P: PolymerSystem + ?Sized>(p: &P, mut entries: Vec<(usize, usize)>) -> Result<Self> {
        entries.sort_unstable();
        if entries.is_empty() || entries.iter().any(|&(_, m)| m == 0) {
            return Err(Error::input("a cluster needs at least one polymer with positive multiplicity"));
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::input("repeated polymer index in cluster entries"));
        }
        if entries.iter().any(|&(i, _)| i >= p.polymer_count()) {
            return Err(Error::input("polymer index out of range"));
        }
        let distinct: Vec<usize> = entries.iter().map(|e| e.0).collect();
        if !distinct_connected(p, &distinct) {
            return Err(Error::input("incompatibility graph of the cluster is disconnected"));
        }
        Ok(Self::from_entries(p, entries))
    }

    fn from_entries<P: PolymerSystem + ?Sized>(p: &P, entries: Vec<(usize, usize)>) -> Self {
        let length = entries.iter().map(|e| e.1).sum();
        let size = entries.iter().map(|&(i, m)| m * p.order(i)).sum();
        let mut ordering_count = factorial(length);
        for &(_, m) in &entries {
            ordering_count /= factorial(m);
        }
        Cluster {
            entries,
            length,
            size,
            ordering_count,
        }
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// `|Γ|`, the number of polymers counted with multiplicity.
    pub fn length(&self) -> usize {
        self.length
    }

    /// `‖Γ‖`, the total polymer order.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of ordered vectors represented by this multiset.
    pub fn ordering_count(&self) -> &BigUint {
        &self.ordering_count
    }

    /// Polymer indices with repetition, in canonical order.
    pub fn expanded(&self) -> Vec<usize> {
        self.entries
            .iter()
            .flat_map(|&(i, m)| std::iter::repeat_n(i, m))
            .collect()
    }

    /// `H_Γ` on the expanded entries.
    pub fn incompatibility_graph<P: PolymerSystem + ?Sized>(&self, p: &P) -> Result<SmallGraph> {
        incompatibility_graph(p, &self.expanded())
    }

    /// `V(Γ)`, the union of the member polymers, when they come from a
    /// hypergraph polymer model.
    pub fn support(&self, model: &PolymerModel) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .entries
            .iter()
            .flat_map(|&(i, _)| model.polymers()[i].vertices().iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn factorial(m: usize) -> BigUint {
    (1..=m).map(BigUint::from).product()
}

fn adjacent<P: PolymerSystem + ?Sized>(p: &P, i: usize, j: usize) -> bool {
    i == j || p.conflicts(i).binary_search(&j).is_ok()
}

fn distinct_connected<P: PolymerSystem + ?Sized>(p: &P, set: &[usize]) -> bool {
    let mut seen = vec![false; set.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..set.len() {
            if !seen[b] && adjacent(p, set[a], set[b]) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// `H_Γ` for an ordered vector of polymer indices: entries are adjacent when
/// incompatible, including repeated copies of one polymer.
pub fn incompatibility_graph<P: PolymerSystem + ?Sized>(p: &P, polymers: &[usize]) -> Result<SmallGraph> {
    if polymers.len() > MAX_ORDER {
        return Err(Error::budget(format!(
            "incompatibility graph with {} vertices exceeds {MAX_ORDER}",
            polymers.len()
        )));
    }
    let mut h = SmallGraph::new(polymers.len());
    for a in 0..polymers.len() {
        for b in a + 1..polymers.len() {
            if adjacent(p, polymers[a], polymers[b]) {
                h.add_edge(a, b);
            }
        }
    }
    Ok(h)
}

/// Every cluster of size at most `t`, once each, sorted by size then entries.
pub fn enumerate_clusters<P: PolymerSystem + Sync + ?Sized>(p: &P, t: usize) -> Result<Vec<Cluster>> {
    if t == 0 {
        return Err(Error::input("cluster size bound must be at least 1"));
    }
    let per_root: Vec<Vec<Cluster>> = (0..p.polymer_count())
        .into_par_iter()
        .map(|root| {
            let mut out = Vec::new();
            if p.order(root) <= t {
                let ext: Vec<usize> = p
                    .conflicts(root)
                    .iter()
                    .copied()
                    .filter(|&j| j > root && p.order(root) + p.order(j) <= t)
                    .collect();
                let mut sub = vec![root];
                grow(p, &mut sub, p.order(root), ext, root, t, &mut out);
            }
            out
        })
        .collect();
    let mut clusters: Vec<Cluster> = per_root.into_iter().flatten().collect();
    clusters.sort_by(|a, b| (a.size, &a.entries).cmp(&(b.size, &b.entries)));
    Ok(clusters)
}

fn grow<P: PolymerSystem + ?Sized>(
    p: &P,
    sub: &mut Vec<usize>,
    used: usize,
    mut ext: Vec<usize>,
    root: usize,
    t: usize,
    out: &mut Vec<Cluster>,
) {
    let mut distinct = sub.clone();
    distinct.sort_unstable();
    let mut mult = vec![1; distinct.len()];
    assign_multiplicities(p, &distinct, &mut mult, 0, used, t, out);
    while let Some(w) = ext.pop() {
        let used_w = used + p.order(w);
        if used_w > t {
            continue;
        }
        let mut next = ext.clone();
        for &u in p.conflicts(w) {
            if u <= root || sub.contains(&u) || used_w + p.order(u) > t {
                continue;
            }
            if !sub.iter().any(|&s| adjacent(p, s, u)) && !next.contains(&u) {
                next.push(u);
            }
        }
        sub.push(w);
        grow(p, sub, used_w, next, root, t, out);
        sub.pop();
    }
}

fn assign_multiplicities<P: PolymerSystem + ?Sized>(
    p: &P,
    distinct: &[usize],
    mult: &mut Vec<usize>,
    pos: usize,
    used: usize,
    t: usize,
    out: &mut Vec<Cluster>,
) {
    if pos == distinct.len() {
        let entries = distinct.iter().copied().zip(mult.iter().copied()).collect();
        out.push(Cluster::from_entries(p, entries));
        return;
    }
    assign_multiplicities(p, distinct, mult, pos + 1, used, t, out);
    let o = p.order(distinct[pos]);
    let mut extra = used;
    while extra + o <= t {
        extra += o;
        mult[pos] += 1;
        assign_multiplicities(p, distinct, mult, pos + 1, extra, t, out);
    }
    mult[pos] = 1;
}

/// `w(Γ) = φ(H_Γ) · Π w(S)` for one ordered representative.
pub fn cluster_weight<P: PolymerSystem + ?Sized>(p: &P, c: &Cluster, ursell_cap: usize) -> Result<Rational> {
    if c.length > ursell_cap {
        return Err(Error::budget(format!(
            "cluster of length {} exceeds the Ursell cap {ursell_cap}",
            c.length
        )));
    }
    let phi = ursell(&c.incompatibility_graph(p)?, ursell_cap)?;
    Ok(c.entries
        .iter()
        .fold(phi, |acc, &(i, m)| acc * pow(p.weight(i), m)))
}

/// `Σ_{‖Γ‖ ≤ t} w(Γ)` over ordered clusters of an arbitrary polymer system.
pub fn truncated_sum<P: PolymerSystem + Sync + ?Sized>(p: &P, t: usize, ursell_cap: usize) -> Result<Rational> {
    let clusters = enumerate_clusters(p, t)?;
    let terms: Vec<Rational> = clusters
        .par_iter()
        .map(|c| Ok(cluster_weight(p, c, ursell_cap)? * Rational::from_integer(c.ordering_count.clone().into())))
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(Rational::zero(), |a, b| a + b))
}

/// The polymer model `P_{Z,t}` and its clusters of size at most `t`.
pub fn class_clusters(g: &Hypergraph, class: usize, t: usize, budgets: &Budgets) -> Result<(PolymerModel, Vec<Cluster>)> {
    if t == 0 {
        return Err(Error::input("cluster size bound must be at least 1"));
    }
    let model = PolymerModel::with_cap(g, class, t, budgets.polymers)?;
    let clusters = enumerate_clusters(&model, t)?;
    Ok((model, clusters))
}

/// Truncated cluster expansion of `log Ξ` for class `class` up to size `t`.
pub fn truncated_log_xi(g: &Hypergraph, class: usize, t: usize, budgets: &Budgets) -> Result<Rational> {
    if t == 0 {
        return Err(Error::input("cluster size bound must be at least 1"));
    }
    let model = PolymerModel::with_cap(g, class, t, budgets.polymers)?;
    truncated_sum(&model, t, budgets.ursell_vertices)
}

/// Log-domain estimate `2^{(k−1)n} Σ_Z exp(truncated_log_xi(Z, t))`.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub t: usize,
    /// Exact exponent per class.
    pub exponents: Vec<Rational>,
    pub value: LogNumber,
}

pub fn estimate_count(g: &Hypergraph, t: usize, budgets: &Budgets) -> Result<Estimate> {
    if g.k() < 3 {
        return Err(Error::input("the estimate needs k ≥ 3"));
    }
    if t == 0 {
        return Err(Error::input("the estimate needs t ≥ 1"));
    }
    if !g.has_equal_class_sizes() {
        return Err(Error::input("the estimate needs equal class sizes"));
    }
    if g.regular_degree().is_none() {
        return Err(Error::input("the estimate needs a regular hypergraph"));
    }
    let exponents: Vec<Rational> = (0..g.k())
        .into_par_iter()
        .map(|z| truncated_log_xi(g, z, t, budgets))
        .collect::<Result<_>>()?;
    let n = g.class_size(0);
    let base = LogNumber::from_ln(((g.k() - 1) * n) as f64 * std::f64::consts::LN_2);
    let sum = LogNumber::sum(exponents.iter().map(|e| LogNumber::from_ln(rational_to_f64(e))));
    Ok(Estimate {
        t,
        exponents,
        value: base * sum,
    })
}

/// One row of the convergence report.
#[derive(Clone, Debug)]
pub struct TrendPoint {
    pub t: usize,
    pub truncated: Rational,
    /// `|truncated − ln Ξ_{Z,b}|` in floating point.
    pub gap: f64,
}

/// `|truncated_log_xi(t) − ln Ξ_{Z,b}|` for `t = 1..=max_t`. The reference
/// uses the polymer bound `bound`; the truncations cap polymer orders at `t`
/// as usual.
pub fn convergence_trend(
    g: &Hypergraph,
    class: usize,
    bound: usize,
    max_t: usize,
    budgets: &Budgets,
) -> Result<Vec<TrendPoint>> {
    let xi = independence_sum(&PolymerModel::with_cap(g, class, bound, budgets.polymers)?);
    let reference = rational_to_f64(&xi).ln();
    (1..=max_t)
        .map(|t| {
            let truncated = truncated_log_xi(g, class, t, budgets)?;
            let gap = (rational_to_f64(&truncated) - reference).abs();
            Ok(TrendPoint { t, truncated, gap })
        })
        .collect()
}

/// Cluster counts grouped by `(size, length)`: multisets and ordered vectors.
pub fn census(clusters: &[Cluster]) -> BTreeMap<(usize, usize), (usize, BigUint)> {
    let mut out: BTreeMap<(usize, usize), (usize, BigUint)> = BTreeMap::new();
    for c in clusters {
        let e = out.entry((c.size, c.length)).or_insert((0, BigUint::zero()));
        e.0 += 1;
        e.1 += &c.ordering_count;
    }
    out
}

/// `Σ_{m=1}^{t} (−1)^{m+1} w^m / m`.
pub fn mercator_truncation(w: &Rational, t: usize) -> Rational {
    (1..=t)
        .map(|m| {
            let term = pow(w, m) / Rational::from_integer(m.into());
            if m % 2 == 1 {
                term
            } else {
                -term
            }
        })
        .fold(Rational::zero(), |a, b| a + b)
}

impl Estimate {
    /// Sum of the per-class exponential factors, `Σ_Z exp(exponent)`.
    pub fn class_factor(&self) -> LogNumber {
        LogNumber::sum(self.exponents.iter().map(|e| LogNumber::from_ln(rational_to_f64(e))))
    }
}

impl Cluster {
    /// Whether all member polymers have order one.
    pub fn is_singleton_only<P: PolymerSystem + ?Sized>(&self, p: &P) -> bool {
        self.entries.iter().all(|&(i, _)| p.order(i) == 1)
    }
}
