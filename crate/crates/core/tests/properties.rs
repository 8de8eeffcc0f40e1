//! Property tests over small random instances.

mod common;

use std::collections::{BTreeSet, VecDeque};

use common::*;
use hypercount::cluster::{class_clusters, truncated_log_xi, truncated_sum};
use hypercount::counting::{count_completions, count_independent_sets, count_with_defect_class};
use hypercount::io;
use hypercount::lab::{check_def, check_exp1, check_girth, gen_linear_regular, ExpansionScan};
use hypercount::polymer::{enumerate_polymers, matching_number, polymer_weight, AbstractPolymerModel};
use hypercount::{Budgets, GirthSearch, Hypergraph, Rational};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn instance(seed: u64, sizes: &[usize], density: u8) -> Hypergraph {
    let p = [0.2, 0.4, 0.6, 0.9][density as usize % 4];
    random_partite(&mut rng(seed), sizes, p)
}

fn sizes_strategy(max: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1..=max, 3)
}

/// Subsets of a class given by a bitmask over its local indices.
fn subset(g: &Hypergraph, class: usize, mask: u32) -> Vec<usize> {
    g.class_range(class)
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, v)| v)
        .collect()
}

fn linear_instance(k: usize, n: usize, r: usize, seed: u64) -> Option<Hypergraph> {
    gen_linear_regular(k, n, r.min(n), seed, None).ok()
}

/// Ordered tuples of polymers with total order at most `t` and connected
/// incompatibility graph, summing `φ(H)·Πw` with a brute-force `φ`.
fn ordered_oracle(g: &Hypergraph, class: usize, t: usize) -> Rational {
    let polymers = enumerate_polymers(g, class, t, None).unwrap();
    let weights: Vec<Rational> = polymers.iter().map(|p| polymer_weight(g, p)).collect();
    let clash = |a: usize, b: usize| {
        a == b || {
            let nb: BTreeSet<usize> = polymers[b].neighborhood().iter().copied().collect();
            polymers[a].neighborhood().iter().any(|x| nb.contains(x))
        }
    };
    let mut total = Rational::zero();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(tuple) = stack.pop() {
        let used: usize = tuple.iter().map(|&i| polymers[i].order()).sum();
        if !tuple.is_empty() {
            let m = tuple.len();
            let edges: Vec<(usize, usize)> = (0..m)
                .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
                .filter(|&(a, b)| clash(tuple[a], tuple[b]))
                .collect();
            if is_connected(m, &edges) {
                let w = tuple.iter().fold(Rational::one(), |acc, &i| acc * &weights[i]);
                total += brute_ursell(m, &edges) * w;
            }
        }
        for (i, p) in polymers.iter().enumerate() {
            if used + p.order() <= t {
                let mut next = tuple.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    total
}

fn z2_distances(g: &Hypergraph, root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.num_vertices()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in g.z2_neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(dist[v].unwrap() + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighbourhood_invariants(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4, class in 0usize..3, mask in any::<u32>()) {
        let g = instance(seed, &sizes, density);
        let s = subset(&g, class, mask);
        let nb = g.neighborhood(&s).unwrap();
        prop_assert!(nb.iter().all(|v| !s.contains(v) && g.class_of(*v) != class));
        let degree_sum: usize = s.iter().map(|&v| g.degree(v)).sum();
        prop_assert!(nb.len() <= (g.k() - 1) * degree_sum);
        // equality iff the incident edges' residues are pairwise disjoint
        let residues: Vec<usize> = s
            .iter()
            .flat_map(|&v| g.incident(v).iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .flat_map(|e| g.edges()[e].iter().copied().filter(|x| !s.contains(x)).collect::<Vec<_>>())
            .collect();
        let distinct: BTreeSet<usize> = residues.iter().copied().collect();
        let per_vertex_edges: usize = degree_sum;
        let all_edges: BTreeSet<usize> = s.iter().flat_map(|&v| g.incident(v).iter().copied()).collect();
        let disjoint = distinct.len() == residues.len() && all_edges.len() == per_vertex_edges;
        prop_assert_eq!(nb.len() == (g.k() - 1) * degree_sum, disjoint);
        if !s.is_empty() {
            let link = g.link_graph(&s).unwrap();
            prop_assert_eq!(link.vertices(), &nb[..]);
        }
    }

    #[test]
    fn two_linked_components_partition(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4, class in 0usize..3, mask in any::<u32>()) {
        let g = instance(seed, &sizes, density);
        let s = subset(&g, class, mask);
        let comps = g.two_linked_components(&s).unwrap();
        let union: BTreeSet<usize> = comps.iter().flatten().copied().collect();
        prop_assert_eq!(union.len(), s.len());
        prop_assert_eq!(union, s.iter().copied().collect::<BTreeSet<_>>());
        for (i, a) in comps.iter().enumerate() {
            prop_assert!(g.is_two_linked(a));
            for b in &comps[i + 1..] {
                prop_assert!(a.iter().all(|&v| b.iter().all(|u| !g.z2_neighbors(v).contains(u))));
            }
        }
    }

    #[test]
    fn defect_sets_sum_to_defect_count(seed in any::<u64>(), sizes in sizes_strategy(3), density in 0u8..4, class in 0usize..3, b in 0usize..4) {
        let g = instance(seed, &sizes, density);
        let mut sum = BigUint::zero();
        for mask in 0u32..1 << g.class_size(class) {
            let t = subset(&g, class, mask);
            let ok = g.two_linked_components(&t).unwrap().iter().all(|c| c.len() <= b);
            if ok {
                sum += count_completions(&g, class, &t).unwrap();
            }
        }
        prop_assert_eq!(sum, count_with_defect_class(&g, class, b, 24).unwrap().count);
    }

    #[test]
    fn count_bounds_and_monotonicity(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4) {
        let g = instance(seed, &sizes, density);
        let count = count_independent_sets(&g.to_edge_system());
        prop_assert_eq!(count.clone(), BigUint::from(brute_independent_sets(&g)));
        for z in 0..g.k() {
            prop_assert!(count >= BigUint::one() << (g.num_vertices() - g.class_size(z)));
        }
        for e in 0..g.num_edges() {
            prop_assert!(count_independent_sets(&g.without_edges(&[e]).to_edge_system()) >= count);
        }
    }

    #[test]
    fn polymer_weights(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4, class in 0usize..3) {
        let g = instance(seed, &sizes, density);
        for p in enumerate_polymers(&g, class, g.class_size(class), None).unwrap() {
            prop_assert!(g.is_two_linked(p.vertices()));
            let w = polymer_weight(&g, &p);
            prop_assert!(w > Rational::zero() && w <= Rational::one());
            let d = w.denom().magnitude();
            prop_assert!(d.count_ones() == 1);
        }
    }

    #[test]
    fn ordered_tuple_oracle(seed in any::<u64>(), sizes in sizes_strategy(3), density in 0u8..4, class in 0usize..3, t in 1usize..=3) {
        let g = instance(seed, &sizes, density);
        let engine = truncated_log_xi(&g, class, t, &Budgets::default()).unwrap();
        prop_assert_eq!(engine, ordered_oracle(&g, class, t));
    }

    #[test]
    fn cluster_invariants_and_locality(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4, class in 0usize..3, t in 1usize..=3) {
        let g = instance(seed, &sizes, density);
        let (model, clusters) = class_clusters(&g, class, t, &Budgets::default()).unwrap();
        for c in &clusters {
            prop_assert!(c.size() >= c.length() && c.length() >= 1 && c.size() <= t);
            prop_assert!(c.incompatibility_graph(&model).unwrap().is_connected());
            let support = c.support(&model);
            prop_assert!(g.is_two_linked(&support));
            prop_assert!(support.len() <= c.size());
            let dist = z2_distances(&g, support[0]);
            prop_assert!(support.iter().all(|&v| matches!(dist[v], Some(d) if d < t)));
        }
    }

    #[test]
    fn single_polymer_taylor_law(num in 1i64..64, t in 1usize..=6) {
        let w = q(num, 64);
        let model = AbstractPolymerModel::unit_orders(vec![w.clone()], &[]).unwrap();
        prop_assert_eq!(truncated_sum(&model, t, 9).unwrap(), mercator(&w, t));
    }

    #[test]
    fn generator_postconditions(k in 3usize..=4, n in 1usize..=7, r in 1usize..=3, seed in 0u64..1000, girth5 in any::<bool>()) {
        let r = r.min(n);
        if let Ok(g) = gen_linear_regular(k, n, r, seed, girth5.then_some(5)) {
            prop_assert_eq!(g.class_sizes(), &vec![n; k][..]);
            prop_assert!(g.is_linear());
            prop_assert_eq!(g.regular_degree(), Some(r));
            prop_assert!(g.edges().iter().all(|e| (0..k).all(|c| e.iter().filter(|&&v| g.class_of(v) == c).count() == 1)));
            if girth5 {
                prop_assert_eq!(g.girth_at_most(4, 10_000_000).unwrap(), GirthSearch::Absent);
                prop_assert!(check_girth(&g, 5, 10_000_000).unwrap().verdict.holds());
            }
        }
    }

    #[test]
    fn matching_lower_bound(k in 3usize..=4, n in 2usize..=7, r in 1usize..=3, seed in 0u64..1000) {
        // instance form: (k−1)·m(S) ≥ |N(S)| − (k−2)·r·|S|
        if let Some(g) = linear_instance(k, n, r, seed) {
            let r = g.regular_degree().unwrap();
            for p in enumerate_polymers(&g, 0, n.min(4), None).unwrap() {
                let m = matching_number(&g, &p);
                let rhs = p.neighborhood().len() as i64 - ((k - 2) * r * p.order()) as i64;
                prop_assert!(((k - 1) * m) as i64 >= rhs, "m = {}, |N| = {}", m, p.neighborhood().len());
            }
        }
    }

    #[test]
    fn common_neighbours_force_short_cycles(k in 3usize..=4, n in 2usize..=6, r in 1usize..=3, seed in 0u64..1000) {
        if let Some(g) = linear_instance(k, n, r, seed) {
            let shared = (0..g.num_vertices()).any(|v| {
                let nv = g.neighborhood(&[v]).unwrap();
                g.z2_neighbors(v).iter().any(|&u| {
                    let nu = g.neighborhood(&[u]).unwrap();
                    nv.iter().filter(|x| nu.contains(x)).count() >= 2
                })
            });
            if shared {
                prop_assert!(g.girth_at_most(4, 10_000_000).unwrap().is_found());
            }
        }
    }

    #[test]
    fn expansion_caps_degree(k in 3usize..=4, n in 3usize..=6, r in 1usize..=6, seed in 0u64..1000, num in 0i64..8) {
        if let Some(g) = linear_instance(k, n, r, seed) {
            let r = g.regular_degree().unwrap();
            let scan = ExpansionScan { size_cap: n, ..ExpansionScan::default() };
            let report = check_exp1(&g, &q(num, 8), &scan).unwrap();
            if report.verdict.holds() {
                prop_assert!(r * r <= 2 * n, "r = {}, n = {}", r, n);
            }
        }
    }

    #[test]
    fn io_round_trip(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4) {
        let g = instance(seed, &sizes, density);
        let text = io::to_text(&g);
        let json = io::to_json(&g);
        prop_assert_eq!(io::parse(&text).unwrap(), g.clone());
        prop_assert_eq!(io::parse(&json).unwrap(), g.clone());
        prop_assert_eq!(io::to_json(&io::parse(&json).unwrap()), json);
        prop_assert_eq!(io::digest(&io::parse(&text).unwrap()), io::digest(&g));
    }

    #[test]
    fn checks_are_deterministic(seed in any::<u64>(), sizes in sizes_strategy(4), density in 0u8..4, b in 0usize..3) {
        let g = instance(seed, &sizes, density);
        // a vertex cap of 0 forces the seeded local search
        for cap in [0, 24] {
            prop_assert_eq!(check_def(&g, b, cap, seed).unwrap(), check_def(&g, b, cap, seed).unwrap());
        }
        if let Some(h) = linear_instance(3, sizes[0] + 2, 2, seed) {
            let scan = ExpansionScan { size_cap: 1, samples: 50, seed };
            prop_assert_eq!(check_exp1(&h, &q(1, 2), &scan).unwrap(), check_exp1(&h, &q(1, 2), &scan).unwrap());
        }
    }
}
