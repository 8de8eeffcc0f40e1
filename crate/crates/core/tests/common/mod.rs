//! Oracles and instance builders shared by the integration tests. Nothing
//! here calls the library routine it is used to check.

#![allow(dead_code)]

use hypercount::{Hypergraph, Rational, VertexId};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn qpow(base: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * base)
}

/// `γ_k^{−1} = (2^{k−1} − 1) / 2^{k−1}`.
pub fn inv_gamma(k: usize) -> Rational {
    let p = BigInt::one() << (k - 1);
    Rational::new(p.clone() - 1, p)
}

/// `Σ (−1)^{|F|}` over spanning connected edge subsets, divided by `m!`,
/// by plain enumeration of all `2^{|E|}` subsets.
pub fn brute_ursell(m: usize, edges: &[(usize, usize)]) -> Rational {
    let mut signed = 0i64;
    for mask in 0u64..(1u64 << edges.len()) {
        let chosen: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if spans_connected(m, &chosen) {
            signed += if chosen.len().is_multiple_of(2) { 1 } else { -1 };
        }
    }
    let fact: i64 = (1..=m as i64).product();
    q(signed, fact)
}

fn spans_connected(m: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..m).all(|v| find(&mut parent, v) == root)
}

/// All labelled graphs on `m` vertices, as edge lists.
pub fn all_graphs(m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    (0u64..(1u64 << pairs.len()))
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}

pub fn is_connected(m: usize, edges: &[(usize, usize)]) -> bool {
    m > 0 && spans_connected(m, edges)
}

/// `Σ_{m=1}^t (−1)^{m+1} w^m / m`.
pub fn mercator(w: &Rational, t: usize) -> Rational {
    let mut sum = Rational::zero();
    for m in 1..=t {
        let term = qpow(w, m) / Rational::from_integer(BigInt::from(m));
        sum = if m % 2 == 1 { sum + term } else { sum - term };
    }
    sum
}

/// Random k-partite k-graph: each of the `Π sizes` possible edges kept with
/// probability `p`.
pub fn random_partite(rng: &mut ChaCha8Rng, sizes: &[usize], p: f64) -> Hypergraph {
    let k = sizes.len();
    let mut edges = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        if rng.gen_bool(p) {
            edges.push(idx.iter().enumerate().map(|(c, &i)| VertexId::new(c, i)).collect());
        }
        let mut c = 0;
        loop {
            if c == k {
                return Hypergraph::new(k, sizes.to_vec(), edges).unwrap();
            }
            idx[c] += 1;
            if idx[c] < sizes[c] {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn edge(vs: &[(usize, usize)]) -> Vec<VertexId> {
    vs.iter().map(|&(c, i)| VertexId::new(c, i)).collect()
}

/// Independent sets of a hypergraph by direct subset scan.
pub fn brute_independent_sets(g: &Hypergraph) -> u64 {
    let nv = g.num_vertices();
    let masks: Vec<u64> = g.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0u64..1 << nv).filter(|s| masks.iter().all(|&m| s & m != m)).count() as u64
}
