//! Checkers for the structural properties the estimates rely on. A
//! violation always carries a witness that reproduces it.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::gamma_k;
use crate::error::{Error, Result};
use crate::hypergraph::{GirthSearch, Hypergraph, VertexId};
use crate::numeric::{fmt_rational, pow, rat_int, rational_to_f64, Rational};

/// A concrete set demonstrating a violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub vertices: Vec<VertexId>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated(Witness),
    Unknown { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated(_) => "violated",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub verdict: Verdict,
    /// Smallest observed ratio where the property is an expansion bound.
    pub worst_ratio: Option<f64>,
    pub params: Vec<(String, String)>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.verdict.label())?;
        if let Verdict::Violated(w) = &self.verdict {
            let vs: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
            write!(f, " [{}] {}", vs.join(" "), w.detail)?;
        }
        Ok(())
    }
}

fn report(name: impl Into<String>, verdict: Verdict, worst_ratio: Option<f64>, params: &[(&str, String)]) -> PropertyReport {
    PropertyReport {
        name: name.into(),
        verdict,
        worst_ratio,
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
    }
}

fn require_regular(g: &Hypergraph) -> Result<usize> {
    g.regular_degree()
        .ok_or_else(|| Error::input("this property is defined for regular hypergraphs"))
}

/// `Reg(t)`: `r ≥ (1/t) log_{γ_k} n`, decided exactly as `γ_k^{t r} ≥ n`
/// with `n` the largest class size.
pub fn check_reg(g: &Hypergraph, t: usize) -> Result<PropertyReport> {
    if t == 0 {
        return Err(Error::input("Reg(t) needs t ≥ 1"));
    }
    let r = require_regular(g)?;
    let n = *g.class_sizes().iter().max().expect("k ≥ 2 classes");
    let gamma = gamma_k(g.k())?;
    let lhs = pow(&gamma, t * r);
    let threshold = (n as f64).ln() / rational_to_f64(&gamma).ln() / t as f64;
    let params = [("t", t.to_string()), ("r", r.to_string()), ("n", n.to_string())];
    let verdict = if lhs >= rat_int(n as i64) {
        Verdict::Holds
    } else {
        Verdict::Violated(Witness {
            vertices: Vec::new(),
            detail: format!("r = {r} < (1/{t}) log_γ {n} ≈ {threshold:.6}"),
        })
    };
    Ok(report(format!("Reg({t})"), verdict, None, &params))
}

/// Sampling and coverage settings for the expansion checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionScan {
    /// Sets up to this size are checked exhaustively.
    pub size_cap: usize,
    /// Random sets drawn per (class, size) bucket above the cap.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ExpansionScan {
    fn default() -> Self {
        ExpansionScan {
            size_cap: 3,
            samples: 10_000,
            seed: 0,
        }
    }
}

/// `Exp₁(α)`: `|N(S)| ≥ (k−1−α) r |S|` for single-class `S` with `|S| ≤ r`.
pub fn check_exp1(g: &Hypergraph, alpha: &Rational, scan: &ExpansionScan) -> Result<PropertyReport> {
    let r = require_regular(g)?;
    let factor = rat_int(g.k() as i64 - 1) - alpha;
    let params = [("alpha", fmt_rational(alpha)), ("r", r.to_string())];
    let (verdict, worst) = expansion(g, r, r, &factor, scan);
    Ok(report(format!("Exp1({})", fmt_rational(alpha)), verdict, worst, &params))
}

/// `Exp₂(β)`: `|N(S)| ≥ (k−2+β) r |S|` for single-class `S` with
/// `|S| ≤ βn/r`.
pub fn check_exp2(g: &Hypergraph, beta: &Rational, scan: &ExpansionScan) -> Result<PropertyReport> {
    let r = require_regular(g)?;
    let n = *g.class_sizes().iter().max().expect("k ≥ 2 classes");
    let max_size = if r == 0 {
        n
    } else {
        let q = beta * rat_int(n as i64) / rat_int(r as i64);
        q.floor().to_integer().try_into().unwrap_or(0usize).min(n)
    };
    let factor = rat_int(g.k() as i64 - 2) + beta;
    let params = [
        ("beta", fmt_rational(beta)),
        ("r", r.to_string()),
        ("max_size", max_size.to_string()),
    ];
    let (verdict, worst) = expansion(g, r, max_size, &factor, scan);
    Ok(report(format!("Exp2({})", fmt_rational(beta)), verdict, worst, &params))
}

/// Scans single-class sets up to `max_size` for `|N(S)| ≥ factor·r·|S|`.
/// Returns the verdict and the smallest `|N(S)| / (r|S|)` seen.
fn expansion(g: &Hypergraph, r: usize, max_size: usize, factor: &Rational, scan: &ExpansionScan) -> (Verdict, Option<f64>) {
    let exhaustive_to = max_size.min(scan.size_cap);
    let mut buckets: Vec<(usize, usize, bool)> = Vec::new();
    for class in 0..g.k() {
        let n = g.class_size(class);
        for s in 1..=max_size.min(n) {
            buckets.push((class, s, s <= exhaustive_to));
        }
    }
    let results: Vec<(Option<Vec<usize>>, Option<f64>)> = buckets
        .par_iter()
        .map(|&(class, s, exhaustive)| {
            let base = g.class_range(class).start;
            let n = g.class_size(class);
            let mut worst: Option<f64> = None;
            let mut check = |set: &[usize]| -> bool {
                let globals: Vec<usize> = set.iter().map(|&i| base + i).collect();
                let nb = g.neighborhood_unchecked(&globals).len();
                if r > 0 {
                    let ratio = nb as f64 / (r * s) as f64;
                    worst = Some(worst.map_or(ratio, |w: f64| w.min(ratio)));
                }
                rat_int(nb as i64) >= factor * rat_int((r * s) as i64)
            };
            let mut violation = None;
            if exhaustive {
                let mut comb: Vec<usize> = (0..s).collect();
                loop {
                    if !check(&comb) {
                        violation = Some(comb.iter().map(|&i| base + i).collect());
                        break;
                    }
                    if !next_combination(&mut comb, n) {
                        break;
                    }
                }
            } else {
                let seed = scan.seed ^ ((class as u64) << 48) ^ ((s as u64) << 32);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..scan.samples {
                    let mut set = sample(&mut rng, n, s).into_vec();
                    set.sort_unstable();
                    if !check(&set) {
                        violation = Some(set.iter().map(|&i| base + i).collect());
                        break;
                    }
                }
            }
            (violation, worst)
        })
        .collect();
    let worst = results.iter().filter_map(|r| r.1).reduce(f64::min);
    if let Some(set) = results.iter().find_map(|r| r.0.clone()) {
        let nb = g.neighborhood_unchecked(&set).len();
        let detail = format!(
            "|N(S)| = {nb} < {} = {} · {r} · {}",
            fmt_rational(&(factor * rat_int((r * set.len()) as i64))),
            fmt_rational(factor),
            set.len()
        );
        return (
            Verdict::Violated(Witness {
                vertices: g.vertex_ids(&set),
                detail,
            }),
            worst,
        );
    }
    if max_size > scan.size_cap && buckets.iter().any(|b| !b.2) {
        let reason = format!(
            "sets of size {}..={max_size} were sampled ({} per bucket), not exhausted",
            scan.size_cap + 1,
            scan.samples
        );
        return (Verdict::Unknown { reason }, worst);
    }
    (Verdict::Holds, worst)
}

/// Advances a sorted `s`-combination of `0..n`; false after the last one.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let s = comb.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if comb[i] < n - s + i {
            comb[i] += 1;
            for j in i + 1..s {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `Def(b)`: every independent set meets some class in at most `b`
/// vertices. Exact when `|V| ≤ max_vertices`; otherwise a seeded local
/// search for a counterexample, reporting unknown if none is found.
pub fn check_def(g: &Hypergraph, b: usize, max_vertices: usize, seed: u64) -> Result<PropertyReport> {
    let params = [("b", b.to_string()), ("max_vertices", max_vertices.to_string())];
    let name = format!("Def({b})");
    if g.class_sizes().iter().any(|&n| n <= b) {
        return Ok(report(name, Verdict::Holds, None, &params));
    }
    let found = if g.num_vertices() <= max_vertices {
        let found = exact_def_violation(g, b);
        if found.is_none() {
            return Ok(report(name, Verdict::Holds, None, &params));
        }
        found
    } else {
        local_def_search(g, b, seed, 2_000)
    };
    let verdict = match found {
        Some(set) => Verdict::Violated(Witness {
            detail: format!("independent set meeting every class in more than {b} vertices"),
            vertices: g.vertex_ids(&set),
        }),
        None => Verdict::Unknown {
            reason: format!(
                "{} vertices exceed the enumeration budget {max_vertices}; local search found no violation",
                g.num_vertices()
            ),
        },
    };
    Ok(report(name, verdict, None, &params))
}

/// Searches for an independent set with exactly `b+1` vertices in every
/// class. Any violating set contains one, so the search is complete.
fn exact_def_violation(g: &Hypergraph, b: usize) -> Option<Vec<usize>> {
    let mut chosen = vec![false; g.num_vertices()];
    let mut picked = Vec::new();
    if def_rec(g, b + 1, 0, g.class_range(0).start, 0, &mut chosen, &mut picked) {
        picked.sort_unstable();
        Some(picked)
    } else {
        None
    }
}

fn def_rec(
    g: &Hypergraph,
    need: usize,
    class: usize,
    next: usize,
    taken: usize,
    chosen: &mut [bool],
    picked: &mut Vec<usize>,
) -> bool {
    if class == g.k() {
        return true;
    }
    if taken == need {
        let start = if class + 1 < g.k() { g.class_range(class + 1).start } else { 0 };
        return def_rec(g, need, class + 1, start, 0, chosen, picked);
    }
    let end = g.class_range(class).end;
    if end - next < need - taken {
        return false;
    }
    for v in next..end {
        if end - v < need - taken {
            break;
        }
        if completes_edge(g, v, chosen) {
            continue;
        }
        chosen[v] = true;
        picked.push(v);
        if def_rec(g, need, class, v + 1, taken + 1, chosen, picked) {
            return true;
        }
        picked.pop();
        chosen[v] = false;
    }
    false
}

fn completes_edge(g: &Hypergraph, v: usize, chosen: &[bool]) -> bool {
    g.incident(v)
        .iter()
        .any(|&e| g.edges()[e].iter().all(|&u| u == v || chosen[u]))
}

/// Random greedy attempts: shuffle, add vertices that keep the set
/// independent, and test the class counts.
fn local_def_search(g: &Hypergraph, b: usize, seed: u64, rounds: usize) -> Option<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = g.num_vertices();
    for _ in 0..rounds {
        let mut order: Vec<usize> = (0..nv).collect();
        for i in (1..nv).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut chosen = vec![false; nv];
        for v in order {
            if !completes_edge(g, v, &chosen) {
                chosen[v] = true;
            }
        }
        let ok = (0..g.k()).all(|c| g.class_range(c).filter(|&v| chosen[v]).count() > b);
        if ok {
            return Some((0..nv).filter(|&v| chosen[v]).collect());
        }
    }
    None
}

/// Distinct edges share at most one vertex.
pub fn check_linear(g: &Hypergraph) -> PropertyReport {
    for (i, e) in g.edges().iter().enumerate() {
        for (j, f) in g.edges().iter().enumerate().skip(i + 1) {
            let shared: Vec<usize> = e.iter().copied().filter(|v| f.contains(v)).collect();
            if shared.len() >= 2 {
                return report(
                    "linear",
                    Verdict::Violated(Witness {
                        vertices: g.vertex_ids(&shared),
                        detail: format!("edges {i} and {j} share {} vertices", shared.len()),
                    }),
                    None,
                    &[],
                );
            }
        }
    }
    report("linear", Verdict::Holds, None, &[])
}

/// Girth at least `min_girth`: no loose cycle of length `3..min_girth`.
pub fn check_girth(g: &Hypergraph, min_girth: usize, node_cap: u64) -> Result<PropertyReport> {
    let name = format!("girth>={min_girth}");
    let params = [("node_cap", node_cap.to_string())];
    if min_girth <= 3 {
        return Ok(report(name, Verdict::Holds, None, &params));
    }
    let verdict = match g.girth_at_most(min_girth - 1, node_cap)? {
        GirthSearch::Absent => Verdict::Holds,
        GirthSearch::Found(cycle) => Verdict::Violated(Witness {
            detail: format!("loose cycle on {} vertices", cycle.len()),
            vertices: cycle,
        }),
        GirthSearch::Indeterminate { nodes } => Verdict::Unknown {
            reason: format!("search stopped after {nodes} nodes"),
        },
    };
    Ok(report(name, verdict, None, &params))
}

/// Every `Z₂`-adjacent pair `v, u` has exactly one common neighbour.
pub fn check_common_neighbor(g: &Hypergraph) -> PropertyReport {
    for v in 0..g.num_vertices() {
        let nv = g.neighborhood_unchecked(&[v]);
        for &u in g.z2_neighbors(v) {
            if u < v {
                continue;
            }
            let nu = g.neighborhood_unchecked(&[u]);
            let common: Vec<usize> = nv.iter().copied().filter(|x| nu.binary_search(x).is_ok()).collect();
            if common.len() != 1 {
                let mut vertices = g.vertex_ids(&[v, u]);
                vertices.extend(g.vertex_ids(&common));
                return report(
                    "common-neighbor",
                    Verdict::Violated(Witness {
                        vertices,
                        detail: format!("{} and {} share {} neighbours", g.vertex_id(v), g.vertex_id(u), common.len()),
                    }),
                    None,
                    &[],
                );
            }
        }
    }
    report("common-neighbor", Verdict::Holds, None, &[])
}
