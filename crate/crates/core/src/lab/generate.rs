//! Random linear `r`-regular k-partite k-graphs by edge assembly.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{GirthSearch, Hypergraph, VertexId};

/// Retry limits for [`gen_linear_regular`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenLimits {
    /// Attempts at placing one edge before the assembly restarts.
    pub attempts_per_edge: usize,
    pub restarts: usize,
    /// DFS node cap for each incremental cycle search.
    pub girth_nodes: u64,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            attempts_per_edge: 200,
            restarts: 400,
            girth_nodes: 2_000_000,
        }
    }
}

/// An `r`-regular k-partite k-graph with `n` vertices per class that is
/// linear and, when `min_girth` is given, has no loose cycle shorter than
/// `min_girth`. Deterministic in `seed`.
pub fn gen_linear_regular(k: usize, n: usize, r: usize, seed: u64, min_girth: Option<usize>) -> Result<Hypergraph> {
    gen_linear_regular_with(k, n, r, seed, min_girth, &GenLimits::default())
}

pub fn gen_linear_regular_with(
    k: usize,
    n: usize,
    r: usize,
    seed: u64,
    min_girth: Option<usize>,
    limits: &GenLimits,
) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::input(format!("uniformity must be at least 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::input("classes must be nonempty"));
    }
    if r > n {
        return Err(Error::input(format!(
            "a linear {r}-regular k-partite k-graph needs r ≤ n, got n = {n}"
        )));
    }
    let max_cycle = min_girth.filter(|&g| g >= 4).map(|g| g - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stalls = 0usize;
    for _ in 0..=limits.restarts {
        match assemble(k, n, r, max_cycle, limits, &mut rng)? {
            Some(g) => {
                debug_assert!(g.is_linear());
                debug_assert!(r == 0 || g.regular_degree() == Some(r));
                return Ok(g);
            }
            None => stalls += 1,
        }
    }
    Err(Error::Generation(format!(
        "no linear {r}-regular instance with k = {k}, n = {n}{} after {stalls} restarts",
        min_girth.map_or(String::new(), |g| format!(", girth ≥ {g}"))
    )))
}

fn assemble(
    k: usize,
    n: usize,
    r: usize,
    max_cycle: Option<usize>,
    limits: &GenLimits,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Hypergraph>> {
    let sizes = vec![n; k];
    // remaining degree per (class, index) and the vertex pairs already covered
    let mut remaining = vec![vec![r; n]; k];
    let mut pairs: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut edges: Vec<Vec<VertexId>> = Vec::with_capacity(n * r);
    for _ in 0..n * r {
        let mut placed = false;
        for _ in 0..limits.attempts_per_edge {
            let Some(edge) = draw_edge(k, &remaining, &pairs, rng) else {
                continue;
            };
            if let Some(len) = max_cycle {
                let mut trial = edges.clone();
                trial.push(edge.clone());
                let g = Hypergraph::new(k, sizes.clone(), trial)?;
                let mut ids = edge.clone();
                ids.sort_unstable();
                let globals = g.globals(&ids)?;
                let idx = g
                    .edges()
                    .binary_search(&globals)
                    .expect("new edge present in trial hypergraph");
                if !matches!(g.loose_cycle_through(idx, len, limits.girth_nodes), GirthSearch::Absent) {
                    continue;
                }
            }
            for a in 0..k {
                remaining[a][edge[a].index] -= 1;
                for b in a + 1..k {
                    pairs.insert((edge[a], edge[b]));
                }
            }
            edges.push(edge);
            placed = true;
            break;
        }
        if !placed {
            return Ok(None);
        }
    }
    Ok(Some(Hypergraph::new(k, sizes, edges)?))
}

/// One vertex per class with spare degree, avoiding pairs already covered,
/// each drawn with probability proportional to spare degree. `None` when some
/// class has no admissible vertex given the earlier picks.
fn draw_edge(
    k: usize,
    remaining: &[Vec<usize>],
    pairs: &HashSet<(VertexId, VertexId)>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<VertexId>> {
    let mut edge: Vec<VertexId> = Vec::with_capacity(k);
    for (class, spare) in remaining.iter().enumerate().take(k) {
        let candidates: Vec<(usize, usize)> = spare
            .iter()
            .enumerate()
            .filter(|&(i, &d)| {
                d > 0 && {
                    let v = VertexId::new(class, i);
                    edge.iter().all(|&u| !pairs.contains(&(u, v)))
                }
            })
            .map(|(i, &d)| (i, d))
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let total: usize = candidates.iter().map(|c| c.1).sum();
        let mut pick = rng.gen_range(0..total);
        let mut chosen = candidates[0].0;
        for &(i, d) in &candidates {
            if pick < d {
                chosen = i;
                break;
            }
            pick -= d;
        }
        edge.push(VertexId::new(class, chosen));
    }
    Some(edge)
}

/// Shuffles class indices independently per class, giving an isomorphic
/// copy. Used to vary instances without changing their structure.
pub fn relabel(g: &Hypergraph, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Vec<usize>> = g
        .class_sizes()
        .iter()
        .map(|&n| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            g.vertex_ids(e)
                .into_iter()
                .map(|v| VertexId::new(v.class, perms[v.class][v.index]))
                .collect()
        })
        .collect();
    Hypergraph::new(g.k(), g.class_sizes().to_vec(), edges).expect("relabelling preserves validity")
}
