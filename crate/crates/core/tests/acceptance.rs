//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use hypercount::closed_form::closed_form_t2;
use hypercount::cluster::{class_clusters, truncated_log_xi, truncated_sum};
use hypercount::counting::{count_by_filter, count_independent_sets, count_with_defect_class, EdgeSystem};
use hypercount::lab::{check_common_neighbor, gen_linear_regular, gen_linear_regular_with, loose_four_cycle, relabel, GenLimits};
use hypercount::numeric::{rat_from_uint, Interval};
use hypercount::polymer::{
    enumerate_polymers, matching_weight_bound, polymer_weight, two_linked_count_bound, AbstractPolymerModel, PolymerModel,
};
use hypercount::report::{compare, RunReport};
use hypercount::ursell::{ursell, SmallGraph};
use hypercount::{Budgets, GirthSearch, Hypergraph, Rational};
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check); 10] = [
        (1, "defect-class count equals 2^(|V|-|Z|) times the partition function", criterion_1),
        (2, "size-one truncation equals n gamma^-r on linear regular instances", criterion_2),
        (3, "size-two truncation equals the enumerated closed form at girth >= 5", criterion_3),
        (4, "size-two cluster counts at girth >= 5", criterion_4),
        (5, "Ursell function against closed forms and brute force", criterion_5),
        (6, "single-polymer truncations equal the log(1+w) Taylor polynomial", criterion_6),
        (7, "backtracking counter equals the subset filter", criterion_7),
        (8, "matching weight bound and 2-linked count bound", criterion_8),
        (9, "common-neighbour check on girth >= 5 instances and loose 4-cycle gadgets", criterion_9),
        (10, "compare report is produced and deterministic", criterion_10),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2}: {name} ({detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2}: {name} ({detail}; {secs:.1}s)");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budgets() -> Budgets {
    Budgets::default()
}

/// Handcrafted k = 3 cases plus a seeded sweep of random k = 3 instances
/// with class sizes at most 4 and at most 12 vertices.
fn small_instances() -> Vec<Hypergraph> {
    let mut out = vec![
        Hypergraph::new(3, vec![1, 1, 1], vec![edge(&[(0, 0), (1, 0), (2, 0)])]).unwrap(),
        Hypergraph::new(3, vec![2, 2, 2], vec![]).unwrap(),
        Hypergraph::new(
            3,
            vec![2, 2, 2],
            vec![
                edge(&[(0, 0), (1, 0), (2, 0)]),
                edge(&[(0, 1), (1, 0), (2, 1)]),
                edge(&[(0, 1), (1, 1), (2, 0)]),
            ],
        )
        .unwrap(),
        loose_four_cycle(3, 2, 0),
    ];
    let mut complete = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                complete.push(edge(&[(0, a), (1, b), (2, c)]));
            }
        }
    }
    out.push(Hypergraph::new(3, vec![2, 2, 2], complete).unwrap());
    let mut r = rng(2024);
    while out.len() < 220 {
        let sizes: Vec<usize> = (0..3).map(|_| r.gen_range(1..=4)).collect();
        if sizes.iter().sum::<usize>() > 12 {
            continue;
        }
        let p = [0.15, 0.3, 0.5, 0.8][r.gen_range(0..4)];
        out.push(random_partite(&mut r, &sizes, p));
    }
    out
}

fn criterion_1() -> Result<String, String> {
    let instances = small_instances();
    let mut comparisons = 0;
    for (idx, g) in instances.iter().enumerate() {
        for z in 0..g.k() {
            let zn = g.class_size(z);
            for b in 0..=zn {
                let direct = count_with_defect_class(g, z, b, 24).map_err(|e| e.to_string())?;
                let xi = PolymerModel::new(g, z, b).map_err(|e| e.to_string())?.partition_function();
                let scale = Rational::from_integer(BigUint::from(2u32).pow((g.num_vertices() - zn) as u32).into());
                ensure(rat_from_uint(&direct.count) == scale * &xi, || {
                    format!("instance {idx}, class {z}, b = {b}: {} vs 2^{} * {xi}", direct.count, g.num_vertices() - zn)
                })?;
                comparisons += 1;
            }
        }
    }
    ensure(instances.len() >= 200, || format!("only {} instances", instances.len()))?;
    Ok(format!("{} instances, {comparisons} (Z, b) pairs", instances.len()))
}

/// Generated linear regular instances with `k ∈ {3,4}`, `n ≤ 6`, `r ≤ 2`.
fn regular_sweep(min_girth: Option<usize>) -> (Vec<(usize, usize, usize, Hypergraph)>, usize) {
    let mut out = Vec::new();
    let mut failures = 0;
    // small girth-five cases are often infeasible; fail fast on them
    let limits = GenLimits { restarts: 40, ..GenLimits::default() };
    for k in [3, 4] {
        for n in 1..=6 {
            for r in 1..=2usize.min(n) {
                for seed in 0..4 {
                    match gen_linear_regular_with(k, n, r, seed, min_girth, &limits) {
                        Ok(g) => out.push((k, n, r, g)),
                        Err(_) => failures += 1,
                    }
                }
            }
        }
    }
    (out, failures)
}

fn criterion_2() -> Result<String, String> {
    let (instances, failures) = regular_sweep(None);
    ensure(instances.len() >= 20, || format!("only {} instances generated", instances.len()))?;
    for (k, n, r, g) in &instances {
        ensure(g.is_linear() && g.regular_degree() == Some(*r), || "generator postcondition".into())?;
        let expected = Rational::from_integer((*n).into()) * qpow(&inv_gamma(*k), *r);
        for z in 0..*k {
            let got = truncated_log_xi(g, z, 1, &budgets()).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("k={k} n={n} r={r} class {z}: {got} != {expected}"))?;
        }
    }
    Ok(format!("{} instances, {failures} infeasible draws skipped", instances.len()))
}

/// `n γ^{−r} − ½ n((k−1)r(r−1)+1) γ^{−2r} + ½ n(k−1)r(r−1) γ^{−(2r−2)} · (1+q²)/2`
/// where the last factor is the weight of a two-vertex polymer divided by
/// `γ^{−(2r−2)}`: its link graph is `2r−2` disjoint `(k−1)`-edges plus two
/// `(k−1)`-edges sharing one vertex.
fn enumerated_t2_exponent(k: usize, n: usize, r: usize) -> Rational {
    let ig = inv_gamma(k);
    let nq = Rational::from_integer(n.into());
    let pairs = Rational::from_integer(((k - 1) * r * (r.saturating_sub(1))).into());
    // independent sets of two (k−1)-edges sharing one vertex, over 2^{2k−3}
    let two = |e: usize| Rational::from_integer(BigUint::from(2u32).pow(e as u32).into());
    let shared = (qpow(&(two(k - 2) - Rational::one()), 2) + two(2 * (k - 2))) / two(2 * k - 3);
    let pair_weight = if r >= 1 { qpow(&ig, 2 * r - 2) * &shared } else { Rational::one() };
    &nq * qpow(&ig, r) - q(1, 2) * &nq * (&pairs + Rational::one()) * qpow(&ig, 2 * r)
        + q(1, 2) * &nq * &pairs * pair_weight
}

fn criterion_3() -> Result<String, String> {
    let (instances, failures) = regular_sweep(Some(5));
    ensure(!instances.is_empty(), || "no girth >= 5 instance generated".into())?;
    let mut with_pairs = 0;
    for (k, n, r, g) in &instances {
        ensure(g.girth_at_most(4, 10_000_000).unwrap() == GirthSearch::Absent, || "girth postcondition".into())?;
        let expected = enumerated_t2_exponent(*k, *n, *r);
        let closed = closed_form_t2(*k, *n, *r).map_err(|e| e.to_string())?;
        ensure(closed.corrected.exponent == expected, || {
            format!("closed form {} != enumerated {expected}", closed.corrected.exponent)
        })?;
        let delta = q(1, 2)
            * Rational::from_integer(((k - 1) * r - 1).into())
            * Rational::from_integer((*n).into())
            * qpow(&inv_gamma(*k), 2 * r);
        ensure(closed.delta == delta, || format!("delta {} != {delta}", closed.delta))?;
        ensure(&closed.corrected.exponent - &closed.printed.exponent == delta, || "delta definition".into())?;
        for z in 0..*k {
            let got = truncated_log_xi(g, z, 2, &budgets()).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("k={k} n={n} r={r} class {z}: {got} != {expected}"))?;
        }
        if *r >= 2 {
            with_pairs += 1;
        }
    }
    ensure(with_pairs > 0, || "no instance with r = 2 reached girth 5".into())?;
    Ok(format!(
        "{} instances ({with_pairs} with r = 2), {failures} infeasible draws skipped",
        instances.len()
    ))
}

/// Girth ≥ 5 linear instances beyond the small sweep.
fn girth_five_instances(count: usize) -> Vec<(usize, usize, usize, Hypergraph)> {
    let mut out = Vec::new();
    let configs = [(3, 6, 2), (3, 7, 2), (3, 8, 2), (3, 9, 2), (3, 10, 2), (3, 12, 2), (4, 16, 2), (4, 20, 2)];
    let mut seed = 0u64;
    while out.len() < count {
        let (k, n, r) = configs[seed as usize % configs.len()];
        if let Ok(g) = gen_linear_regular(k, n, r, seed, Some(5)) {
            out.push((k, n, r, g));
        }
        seed += 1;
        assert!(seed < 20 * count as u64, "girth-5 generation stalls");
    }
    out
}

fn criterion_4() -> Result<String, String> {
    let instances = girth_five_instances(14);
    let mut lines = BTreeSet::new();
    for (k, n, r, g) in &instances {
        let half_pairs = n * (k - 1) * r * (r - 1) / 2;
        for z in 0..*k {
            let (model, clusters) = class_clusters(g, z, 2, &budgets()).map_err(|e| e.to_string())?;
            let singleton = |i: usize| model.polymers()[i].order() == 1;
            let distinct_singleton_pairs = clusters
                .iter()
                .filter(|c| c.entries().len() == 2 && c.entries().iter().all(|&(i, _)| singleton(i)))
                .count();
            let ordered_singleton_pairs: BigUint = clusters
                .iter()
                .filter(|c| c.length() == 2 && c.entries().iter().all(|&(i, _)| singleton(i)))
                .map(|c| c.ordering_count().clone())
                .sum();
            let pair_polymers = clusters
                .iter()
                .filter(|c| c.length() == 1 && c.size() == 2)
                .count();
            // oracle: ordered (v, u) with v = u or N(v) ∩ N(u) ≠ ∅
            let zr = g.class_range(z);
            let nbhd = |v: usize| g.neighborhood(&[v]).unwrap();
            let mut oracle = 0usize;
            for v in zr.clone() {
                for u in zr.clone() {
                    if v == u || nbhd(v).iter().any(|x| nbhd(u).contains(x)) {
                        oracle += 1;
                    }
                }
            }
            let expected_ordered = n * ((k - 1) * r * (r - 1) + 1);
            ensure(distinct_singleton_pairs == half_pairs, || {
                format!("unordered singleton pairs {distinct_singleton_pairs} != {half_pairs}")
            })?;
            ensure(pair_polymers == half_pairs, || format!("size-2 polymers {pair_polymers} != {half_pairs}"))?;
            ensure(ordered_singleton_pairs == BigUint::from(expected_ordered), || {
                format!("ordered pairs {ordered_singleton_pairs} != {expected_ordered}")
            })?;
            ensure(oracle == expected_ordered, || format!("oracle {oracle} != {expected_ordered}"))?;
        }
        lines.insert(format!(
            "k={k} n={n} r={r}: ordered {} vs the n(k-1)r^2 approximation = {}",
            n * ((k - 1) * r * (r - 1) + 1),
            n * (k - 1) * r * r
        ));
    }
    let lines: Vec<String> = lines.into_iter().collect();
    Ok(format!("{} instances; {}", instances.len(), lines.join(", ")))
}

fn criterion_5() -> Result<String, String> {
    let mut checked = 0;
    for m in 1..=5usize {
        let complete: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let fact: i64 = (1..=m as i64).product();
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let got = ursell(&SmallGraph::from_edges(m, &complete), 9).map_err(|e| e.to_string())?;
        ensure(got == q(sign, m as i64), || format!("K_{m}: {got}"))?;
        // a path and a star are both trees
        let path: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
        let star: Vec<(usize, usize)> = (1..m).map(|i| (0, i)).collect();
        for tree in [path, star] {
            let got = ursell(&SmallGraph::from_edges(m, &tree), 9).map_err(|e| e.to_string())?;
            ensure(got == q(sign, fact), || format!("tree on {m}: {got}"))?;
        }
        for edges in all_graphs(m) {
            if !is_connected(m, &edges) {
                continue;
            }
            let got = ursell(&SmallGraph::from_edges(m, &edges), 9).map_err(|e| e.to_string())?;
            let want = brute_ursell(m, &edges);
            ensure(got == want, || format!("{edges:?}: {got} != {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} connected labelled graphs"))
}

fn criterion_6() -> Result<String, String> {
    for w in [q(1, 2), q(3, 4)] {
        let model = AbstractPolymerModel::unit_orders(vec![w.clone()], &[]).map_err(|e| e.to_string())?;
        for t in 1..=6 {
            let got = truncated_sum(&model, t, 9).map_err(|e| e.to_string())?;
            let want = mercator(&w, t);
            ensure(got == want, || format!("w = {w}, t = {t}: {got} != {want}"))?;
        }
    }
    Ok("w in {1/2, 3/4}, t = 1..6".into())
}

fn criterion_7() -> Result<String, String> {
    let mut r = rng(7);
    let mut total_vertices = 0;
    for i in 0..500 {
        let nv = r.gen_range(1..=20usize);
        let u = r.gen_range(2..=4usize).min(nv);
        let m = r.gen_range(0..=2 * nv);
        let edges: Vec<Vec<usize>> = (0..m)
            .map(|_| rand::seq::index::sample(&mut r, nv, u).into_vec())
            .collect();
        let h = EdgeSystem::new(nv, edges).map_err(|e| e.to_string())?;
        let fast = count_independent_sets(&h);
        let slow = count_by_filter(&h).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("system {i}: {fast} != {slow}"))?;
        total_vertices += nv;
    }
    Ok(format!("500 systems, {total_vertices} vertices in total"))
}

fn criterion_8() -> Result<String, String> {
    let mut graphs: Vec<Hypergraph> = small_instances();
    graphs.extend(regular_sweep(None).0.into_iter().map(|x| x.3));
    graphs.extend(regular_sweep(Some(5)).0.into_iter().map(|x| x.3));
    let mut polymers = 0;
    let mut counted = 0;
    let mut bounds: BTreeMap<(usize, usize, usize), Interval> = BTreeMap::new();
    for (idx, g) in graphs.iter().enumerate() {
        let gamma_bound_ok = |p: &hypercount::polymer::Polymer| -> Result<(), String> {
            let w = polymer_weight(g, p);
            let bound = matching_weight_bound(g, p).map_err(|e| e.to_string())?;
            ensure(w <= bound, || format!("instance {idx}: w = {w} exceeds {bound}"))
        };
        let delta = g.max_degree();
        for z in 0..g.k() {
            let all = enumerate_polymers(g, z, g.class_size(z), None).map_err(|e| e.to_string())?;
            for p in &all {
                gamma_bound_ok(p)?;
                polymers += 1;
            }
            for v in g.class_range(z) {
                let mut by_order: BTreeMap<usize, u64> = BTreeMap::new();
                for p in enumerate_polymers(g, z, g.class_size(z), Some(v)).map_err(|e| e.to_string())? {
                    *by_order.entry(p.order()).or_default() += 1;
                }
                for (s, c) in by_order {
                    let bound = bounds
                        .entry((g.k(), delta, s))
                        .or_insert_with(|| two_linked_count_bound(g.k(), delta, s));
                    ensure(Rational::from_integer(c.into()) <= bound.lo, || {
                        format!("instance {idx}: {c} 2-linked sets of order {s} exceed {bound}")
                    })?;
                    counted += 1;
                }
            }
        }
    }
    Ok(format!("{} instances, {polymers} polymers, {counted} (vertex, order) counts", graphs.len()))
}

fn criterion_9() -> Result<String, String> {
    let instances = girth_five_instances(50);
    for (k, n, r, g) in &instances {
        ensure(check_common_neighbor(g).verdict.holds(), || format!("k={k} n={n} r={r} violates"))?;
    }
    let mut gadgets = 0;
    for k in 3..=5 {
        for y in 2..k {
            for pad in 0..2 {
                let g = relabel(&loose_four_cycle(k, y, pad), (k * 10 + y * 2 + pad) as u64);
                ensure(check_common_neighbor(&g).verdict.is_violated(), || format!("gadget k={k} y={y} not flagged"))?;
                ensure(g.girth_at_most(4, 1_000_000).unwrap().is_found(), || "gadget has no loose 4-cycle".into())?;
                gadgets += 1;
            }
        }
    }
    ensure(gadgets >= 10, || format!("only {gadgets} gadgets"))?;
    Ok(format!("{} girth >= 5 instances hold, {gadgets} gadgets violated", instances.len()))
}

fn criterion_10() -> Result<String, String> {
    let mut rows = Vec::new();
    let render = |g: &Hypergraph, t: usize| -> Result<String, String> {
        let mut report = RunReport::new("compare");
        report.param("t", t);
        compare(g, t, &budgets()).map_err(|e| e.to_string())?.fill(&mut report);
        Ok(report.exact_text())
    };
    for (i, (k, n, r)) in [(3, 3, 2), (3, 4, 2), (3, 5, 2), (3, 6, 2), (4, 4, 2), (3, 6, 3)].into_iter().enumerate() {
        let g = gen_linear_regular(k, n, r, i as u64, None).map_err(|e| e.to_string())?;
        for t in [1, 2] {
            let a = render(&g, t)?;
            let b = render(&g, t)?;
            ensure(a == b, || format!("k={k} n={n} r={r} t={t}: reports differ"))?;
            let err = a
                .lines()
                .find_map(|l| l.strip_prefix("estimate_rel_error="))
                .ok_or("missing estimate_rel_error")?
                .to_string();
            rows.push(format!("k={k} n={n} r={r} t={t} rel.err={err}"));
        }
    }
    // the report is informational; the guarantee it would test is asymptotic
    for row in &rows {
        println!("    compare: {row}");
    }
    Ok(format!("{} deterministic reports", rows.len()))
}
