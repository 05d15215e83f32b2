use std::collections::BTreeSet;

use proptest::prelude::*;

use krho::format::{parse_graph, parse_shortcuts, write_graph, write_shortcuts};
use krho::hardness::{random_hypergraph, solve_hitting_exact};
use krho::kk1::{Kk1Context, VertexOrdering};
use krho::oracle;
use krho::solvers::{solve_exact, solve_greedy, CandidatePool, ExactOptions, SolveError};
use krho::{
    all_pairs_shortest_with_hops, apply_shortcuts, ball_certificate, deficient_vertices,
    normalize_to_hop2, verify_shortcut_set, Params, ShortcutSet, WeightedGraph,
};

fn graph(max_n: usize, max_w: u64, directed: Option<bool>) -> impl Strategy<Value = WeightedGraph> {
    let orient = match directed {
        Some(d) => Just(d).boxed(),
        None => any::<bool>().boxed(),
    };
    (1..=max_n, orient).prop_flat_map(move |(n, directed)| {
        let pairs = n * n;
        proptest::collection::vec(proptest::option::weighted(0.4, 1..=max_w), pairs).prop_map(move |ws| {
            let mut g = WeightedGraph::new(n, directed);
            for (i, w) in ws.into_iter().enumerate() {
                let (u, v) = (i / n, i % n);
                if let Some(w) = w {
                    if u != v && (directed || u < v) {
                        g.add_edge(u, v, w).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn params() -> impl Strategy<Value = Params> {
    (1usize..=3, 1usize..=3).prop_map(|(k, extra)| Params::new(k, k + extra).unwrap())
}

fn subset(g: &WeightedGraph, mask: u64) -> ShortcutSet {
    oracle::all_candidate_shortcuts(g)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, s)| s)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn table_matches_path_enumeration(g in graph(6, 3, None)) {
        let table = all_pairs_shortest_with_hops(&g).unwrap();
        let truth = oracle::enumerate_simple_paths(&g);
        for u in 0..g.vertex_count() {
            prop_assert_eq!(table.row(u), truth[u].as_slice());
        }
    }

    #[test]
    fn triangle_inequality(g in graph(7, 5, None)) {
        let t = all_pairs_shortest_with_hops(&g).unwrap();
        let n = g.vertex_count();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let (Some(ab), Some(bc)) = (t.dist(a, b), t.dist(b, c)) {
                        prop_assert!(t.dist(a, c).unwrap() <= ab + bc);
                    }
                }
            }
        }
    }

    #[test]
    fn certificate_matches_definition(g in graph(6, 3, None), p in params()) {
        let table = all_pairs_shortest_with_hops(&g).unwrap();
        let truth = oracle::enumerate_simple_paths(&g);
        for u in 0..g.vertex_count() {
            prop_assert_eq!(ball_certificate(&table, p, u).has_ball, oracle::has_ball_by_subsets(&truth[u], p, u));
        }
    }

    #[test]
    fn shortcuts_keep_distances_and_balls(g in graph(7, 4, None), p in params(), mask in any::<u64>()) {
        let s = subset(&g, mask);
        let h = apply_shortcuts(&g, &s).unwrap();
        let (tg, th) = (all_pairs_shortest_with_hops(&g).unwrap(), all_pairs_shortest_with_hops(&h).unwrap());
        let n = g.vertex_count();
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(tg.dist(u, v), th.dist(u, v));
                prop_assert!(th.hops(u, v) <= tg.hops(u, v));
            }
        }
        let before = deficient_vertices(&g, p).unwrap().deficient;
        let after = deficient_vertices(&h, p).unwrap().deficient;
        prop_assert!(after.is_subset(&before));
    }

    #[test]
    fn formats_round_trip(g in graph(9, 1000, None), mask in any::<u64>()) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g.clone());
        let s = subset(&g, mask);
        prop_assert_eq!(parse_shortcuts(&write_shortcuts(&s), g.vertex_count()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_exhaustive(g in graph(5, 3, None), p in params()) {
        let table = all_pairs_shortest_with_hops(&g).unwrap();
        let pool = CandidatePool::full(&g, &table);
        let got = solve_exact(&g, p, &pool, ExactOptions::default()).unwrap();
        let want = oracle::exhaustive_min_shortcuts(&g, p, &pool.candidates, pool.candidates.len()).unwrap();
        prop_assert_eq!(got.shortcuts.len(), want.len());
        prop_assert!(verify_shortcut_set(&g, p, &got.shortcuts).unwrap().valid);
    }

    #[test]
    fn greedy_is_valid_and_never_below_exact(g in graph(6, 3, None), p in params()) {
        let table = all_pairs_shortest_with_hops(&g).unwrap();
        let pool = CandidatePool::full(&g, &table);
        let exact = solve_exact(&g, p, &pool, ExactOptions::default()).unwrap();
        match solve_greedy(&g, p, &pool) {
            Ok(r) => {
                prop_assert!(verify_shortcut_set(&g, p, &r.shortcuts).unwrap().valid);
                prop_assert!(r.shortcuts.len() >= exact.shortcuts.len());
            }
            Err(SolveError::Stalled { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn normalization_keeps_validity(g in graph(7, 3, Some(false)), k in 2usize..=3, mask in any::<u64>()) {
        let p = Params::new(k, k + 1).unwrap();
        let table = all_pairs_shortest_with_hops(&g).unwrap();
        let mut s = subset(&g, mask);
        for c in CandidatePool::full(&g, &table).candidates {
            if !verify_shortcut_set(&g, p, &s).unwrap().valid {
                s.insert(c);
            }
        }
        prop_assume!(verify_shortcut_set(&g, p, &s).unwrap().valid);
        let t = normalize_to_hop2(&g, p, &s).unwrap();
        prop_assert!(t.len() <= s.len());
        prop_assert!(t.iter().all(|c| table.hops(c.u, c.v) == Some(2)));
        prop_assert!(verify_shortcut_set(&g, p, &t).unwrap().valid);
    }

    #[test]
    fn restricted_subgraph_is_forest(g in graph(10, 4, Some(false)), k in 2usize..=3, seed in any::<u64>()) {
        let phi = VertexOrdering::random(g.vertex_count(), seed);
        let ctx = Kk1Context::new(&g, Params::new(k, k + 1).unwrap(), Some(phi)).unwrap();
        let rsg = ctx.restricted_subgraph().unwrap();
        prop_assert!(rsg.is_forest(g.vertex_count()));
        prop_assert_eq!(rsg.demand_paths.keys().copied().collect::<BTreeSet<_>>(), ctx.deficient().clone());
    }

    #[test]
    fn hitting_search_matches_brute_force(n in 1usize..=7, m in 0usize..=6, seed in any::<u64>()) {
        let d = n.min(3);
        let h = random_hypergraph(n, m, d, seed);
        let got = solve_hitting_exact(&h, None, 1_000_000).unwrap().unwrap();
        prop_assert!(h.is_hitting_set(&got.vertices));
        prop_assert_eq!(got.len(), oracle::brute_force_hitting_set(n, h.hyperedges()).len());
    }
}
