use std::collections::BTreeSet;

use atsp_core::flow::{max_flow, min_cost_circulation, CirculationArc, CirculationError};
use atsp_core::graph::{euler_walk, is_eulerian_connected, Digraph, EdgeMultiset};
use atsp_core::harness::{
    gen_instance, held_karp_opt, parse_instance, parse_instance_file, run_pipeline, to_json,
    verify_tour, Model, PipelineOptions,
};
use atsp_core::lp::simplex::{Constraint, Relation, Simplex, SimplexError};
use atsp_core::rational::{self, frac, int};
use atsp_core::Rational;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..50).prop_map(|(p, q)| frac(p, q))
}

fn model() -> impl Strategy<Value = Model> {
    prop::sample::select(Model::ALL.to_vec())
}

/// Complete digraph with the given costs (row-major, diagonal skipped).
fn complete(n: usize, costs: &[u32]) -> Digraph {
    let mut arcs = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                arcs.push((u, v, int(costs[k] as i64)));
                k += 1;
            }
        }
    }
    Digraph::from_edges(n, arcs).unwrap()
}

fn complete_graph() -> impl Strategy<Value = Digraph> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(0u32..30, n * (n - 1)).prop_map(move |c| complete(n, &c))
    })
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn brute_force_tour(g: &Digraph) -> Rational {
    let n = g.n();
    let mut cheapest = vec![vec![None::<Rational>; n]; n];
    for e in g.edges() {
        let slot = &mut cheapest[e.tail][e.head];
        if slot.as_ref().is_none_or(|c| e.cost < *c) {
            *slot = Some(e.cost.clone());
        }
    }
    // Closed walks may revisit vertices: permute over shortest-path distances.
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (&cheapest[i][k], &cheapest[k][j]) {
                    let via = a + b;
                    if cheapest[i][j].as_ref().is_none_or(|c| via < *c) {
                        cheapest[i][j] = Some(via);
                    }
                }
            }
        }
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut perms = Vec::new();
    permutations(&mut rest, 0, &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let order: Vec<usize> = std::iter::once(0).chain(p).collect();
            (0..n)
                .map(|i| cheapest[order[i]][order[(i + 1) % n]].clone().unwrap())
                .sum::<Rational>()
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rational_format_round_trips(r in small_rational()) {
        prop_assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }

    #[test]
    fn rational_parse_never_panics(s in "\\PC{0,12}") {
        let _ = rational::parse(&s);
    }

    #[test]
    fn held_karp_matches_permutations_of_the_closure(g in complete_graph()) {
        prop_assert_eq!(held_karp_opt(&g).unwrap(), brute_force_tour(&g));
    }

    #[test]
    fn generators_are_deterministic(m in model(), n in 1usize..12, seed in any::<u64>()) {
        let a = gen_instance(m, n, seed);
        let b = gen_instance(m, n, seed);
        prop_assert_eq!(to_json("x", &a), to_json("x", &b));
        prop_assert_eq!(a.n(), n);
        prop_assert!(a.is_strongly_connected());
    }

    #[test]
    fn json_round_trips(m in model(), n in 1usize..10, seed in 0u64..1000) {
        let g = gen_instance(m, n, seed);
        let text = to_json("rt", &g);
        let back = parse_instance_file(text.as_bytes()).unwrap();
        prop_assert_eq!(back.name, "rt");
        prop_assert_eq!(to_json("rt", &back.graph), text);
    }

    #[test]
    fn parse_instance_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_instance(&bytes);
    }

    #[test]
    fn parse_instance_never_panics_on_near_json(s in "\\{\"n\": ?[0-9]{1,2}, ?\"edges\": ?\\[(\\[[0-9], ?[0-9], ?\"?-?[0-9/.]{1,4}\"?\\],? ?){0,4}\\]\\}") {
        let _ = parse_instance(s.as_bytes());
    }

    #[test]
    fn parse_instance_never_panics_on_near_tsplib(dim in 0usize..5, cells in prop::collection::vec("-?[0-9]{1,3}|x", 0..30)) {
        let text = format!("NAME: p\nTYPE: ATSP\nDIMENSION: {dim}\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n{}\nEOF\n", cells.join(" "));
        let _ = parse_instance(text.as_bytes());
    }

    #[test]
    fn euler_walk_traverses_every_edge(m in model(), n in 2usize..12, seed in 0u64..1000, reps in 1u64..3) {
        let g = gen_instance(m, n, seed);
        // Each edge closed by a shortest path back: a connected Eulerian multiset.
        let mut f = EdgeMultiset::new();
        for e in 0..g.m() {
            let ed = g.edge(e);
            let back = atsp_core::graph::bfs_path(&g, ed.head, ed.tail, &vec![true; g.n()], |_| true).unwrap();
            f.add(e, reps);
            for b in back {
                f.add(b, reps);
            }
        }
        let check = is_eulerian_connected(&g, &f).unwrap();
        prop_assert!(check.eulerian);
        let walk = euler_walk(&g, &f, 0).unwrap();
        prop_assert_eq!(walk.len() as u64, f.iter().map(|(_, k)| k).sum::<u64>());
        let mut used = EdgeMultiset::new();
        for w in walk.windows(2) {
            prop_assert_eq!(g.edge(w[0]).head, g.edge(w[1]).tail);
        }
        prop_assert_eq!(g.edge(walk[0]).tail, 0);
        prop_assert_eq!(g.edge(*walk.last().unwrap()).head, 0);
        for e in walk {
            used.add(e, 1);
        }
        prop_assert_eq!(used, f);
    }

    #[test]
    fn max_flow_equals_min_cut(n in 2usize..6, arcs in prop::collection::vec((0usize..6, 0usize..6, 0i64..8), 0..14)) {
        let arcs: Vec<(usize, usize, Rational)> =
            arcs.into_iter().filter(|&(u, v, _)| u < n && v < n && u != v).map(|(u, v, c)| (u, v, int(c))).collect();
        let mf = max_flow(n, &arcs, 0, n - 1);
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 || mask & (1 << (n - 1)) != 0 {
                continue;
            }
            let cut: Rational =
                arcs.iter().filter(|(u, v, _)| mask >> u & 1 == 1 && mask >> v & 1 == 0).map(|(_, _, c)| c.clone()).sum();
            if best.as_ref().is_none_or(|b| cut < *b) {
                best = Some(cut);
            }
        }
        prop_assert_eq!(&mf.value, best.as_ref().unwrap());
        prop_assert!(mf.source_side[0] && !mf.source_side[n - 1]);
        let side_cut: Rational = arcs
            .iter()
            .filter(|(u, v, _)| mf.source_side[*u] && !mf.source_side[*v])
            .map(|(_, _, c)| c.clone())
            .sum();
        prop_assert_eq!(side_cut, mf.value);
    }

    #[test]
    fn min_cost_circulation_matches_simplex(
        n in 2usize..5,
        raw in prop::collection::vec((0usize..5, 0usize..5, 0i64..3, 0i64..4, 0i64..6), 1..10),
    ) {
        let arcs: Vec<CirculationArc> = raw
            .into_iter()
            .filter(|&(u, v, ..)| u < n && v < n)
            .map(|(u, v, lo, extra, c)| CirculationArc { from: u, to: v, lower: int(lo), upper: int(lo + extra), cost: int(c) })
            .collect();
        prop_assume!(!arcs.is_empty());
        let mut rows = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            rows.push(Constraint::new(vec![(i, int(1))], Relation::Ge, a.lower.clone()));
            rows.push(Constraint::new(vec![(i, int(1))], Relation::Le, a.upper.clone()));
        }
        for v in 0..n {
            let mut coeffs = Vec::new();
            for (i, a) in arcs.iter().enumerate() {
                if a.from == a.to {
                    continue;
                }
                if a.from == v {
                    coeffs.push((i, int(1)));
                } else if a.to == v {
                    coeffs.push((i, int(-1)));
                }
            }
            if !coeffs.is_empty() {
                rows.push(Constraint::new(coeffs, Relation::Eq, int(0)));
            }
        }
        let lp = Simplex::solve(arcs.iter().map(|a| a.cost.clone()).collect(), &rows);
        match (min_cost_circulation(n, &arcs), lp) {
            (Ok(f), Ok(s)) => {
                let cost: Rational = f.iter().zip(&arcs).map(|(x, a)| x * &a.cost).sum();
                prop_assert_eq!(&cost, s.objective());
                for (x, a) in f.iter().zip(&arcs) {
                    prop_assert!(a.lower <= *x && *x <= a.upper && x.is_integer());
                }
            }
            (Err(CirculationError::Infeasible), Err(SimplexError::Infeasible)) => {}
            (a, b) => prop_assert!(false, "flow {:?} vs simplex {:?}", a, b.map(|s| s.objective().clone())),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pipeline_returns_a_tour_within_the_bound(m in model(), n in 1usize..8, seed in 0u64..10_000) {
        let g = gen_instance(m, n, seed);
        let opts = PipelineOptions { oracle: true, ..PipelineOptions::default() };
        let report = run_pipeline("p", &g, &opts).unwrap();
        let lp = rational::parse(&report.lp_value).unwrap();
        let cost = rational::parse(&report.tour_cost).unwrap();
        let opt = rational::parse(report.held_karp_opt.as_ref().unwrap()).unwrap();
        prop_assert!(lp <= opt && opt <= cost);
        prop_assert!(cost <= (int(22) + opts.epsilon.clone()) * &lp);
        let walk = report.walk.clone();
        let visited: BTreeSet<usize> = walk.iter().copied().collect();
        prop_assert_eq!(visited.len(), n);
        let mut f = EdgeMultiset::new();
        for w in walk.windows(2) {
            let e = g.out_edges(w[0]).iter().copied().filter(|&e| g.edge(e).head == w[1]).min_by(|&a, &b| g.edge(a).cost.cmp(&g.edge(b).cost));
            prop_assert!(e.is_some());
            f.add(e.unwrap(), 1);
        }
        if n > 1 {
            let verdict = verify_tour(&g, &f);
            prop_assert!(verdict.valid, "{:?}", verdict.diagnostics);
            prop_assert!(rational::parse(&verdict.cost).unwrap() <= cost);
        }
    }
}
