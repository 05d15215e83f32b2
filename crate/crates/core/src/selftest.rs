//! Randomised oracle-equivalence suites.
//!
//! Each `criterion_*` function samples instances deterministically from a
//! seed, checks one family of properties against the brute-force routines in
//! [`crate::oracle`] (or against a second solver), and summarises the result
//! as a [`CriterionOutcome`]. The acceptance test target and the `selftest`
//! command both drive these.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format;
use crate::graph::{
    all_pairs_shortest_with_hops, ball_certificate, deficient_vertices, rho_closest_union, Params,
    Vertex, WeightedGraph,
};
use crate::hardness::{
    assignments_from_shortcuts, extract_hitting_from_tiebreak, random_graph, random_hypergraph,
    reduce_thm1, reduce_tiebreaker, Hypergraph,
};
use crate::kk1::{Kk1Context, TreeMode, VertexOrdering};
use crate::oracle;
use crate::shortcut::{apply_shortcuts, normalize_to_hop2, verify_shortcut_set, Shortcut, ShortcutSet};
use crate::solvers::{solve_exact, solve_greedy, solve_k1, CandidatePool, ExactOptions, SolveError};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub instances: usize,
    pub violations: usize,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
    #[serde(serialize_with = "secs")]
    pub time_limit: Duration,
    pub detail: String,
    /// First few violation messages.
    pub samples: Vec<String>,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} ({} instances, {} violations, {:.1}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.instances,
            self.violations,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Instance counts per criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sizes {
    pub distance: usize,
    pub apply: usize,
    pub trivial: usize,
    pub k1: usize,
    pub thm1: usize,
    pub structure: usize,
    pub normalize: usize,
    pub kk1: usize,
    pub tiebreaker: usize,
    pub formats: usize,
}

impl Sizes {
    pub const FULL: Sizes = Sizes {
        distance: 1000,
        apply: 500,
        trivial: 200,
        k1: 200,
        thm1: 100,
        structure: 500,
        normalize: 200,
        kk1: 200,
        tiebreaker: 100,
        formats: 1000,
    };

    pub const QUICK: Sizes = Sizes {
        distance: 100,
        apply: 50,
        trivial: 20,
        k1: 20,
        thm1: 10,
        structure: 50,
        normalize: 20,
        kk1: 20,
        tiebreaker: 10,
        formats: 100,
    };
}

const MINUTE: Duration = Duration::from_secs(60);
const NO_LIMIT: Duration = Duration::from_secs(24 * 3600);
const MAX_SAMPLES: usize = 5;

struct Tally {
    id: u8,
    title: &'static str,
    start: Instant,
    limit: Duration,
}

impl Tally {
    fn new(id: u8, title: &'static str, limit: Duration) -> Self {
        Self {
            id,
            title,
            start: Instant::now(),
            limit,
        }
    }

    fn finish(self, results: Vec<Result<(), String>>, detail: String) -> CriterionOutcome {
        let elapsed = self.start.elapsed();
        let failures: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
        CriterionOutcome {
            id: self.id,
            title: self.title,
            passed: failures.is_empty() && elapsed < self.limit,
            instances: results.len(),
            violations: failures.len(),
            elapsed,
            time_limit: self.limit,
            detail,
            samples: failures.into_iter().take(MAX_SAMPLES).collect(),
        }
    }
}

fn rng_for(seed: u64, criterion: u8, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(criterion) << 56) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn sample_graph(rng: &mut ChaCha8Rng, n_max: usize, max_w: u64, directed: bool, p: (f64, f64)) -> WeightedGraph {
    let n = rng.gen_range(1..=n_max);
    let density = rng.gen_range(p.0..=p.1);
    random_graph(n, density, max_w, directed, rng.gen())
}

/// Random deep spanning tree on `n_min..=n_max` vertices plus each remaining
/// pair with probability in `extra`; keeps hop distances long enough for
/// `rho = k + 1` to bite.
fn sample_sparse(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize, max_w: u64, extra: (f64, f64)) -> WeightedGraph {
    let n = rng.gen_range(n_min..=n_max);
    let density = rng.gen_range(extra.0..=extra.1);
    let mut g = WeightedGraph::new(n, false);
    for v in 1..n {
        let u = rng.gen_range(v.saturating_sub(3)..v);
        g.add_edge(u, v, rng.gen_range(1..=max_w)).expect("tree edge is new");
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.weight(u, v).is_none() && rng.gen_bool(density) {
                g.add_edge(u, v, rng.gen_range(1..=max_w)).expect("pair is new");
            }
        }
    }
    g
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn describe(g: &WeightedGraph) -> String {
    format::write_graph(g).replace('\n', "; ")
}

/// Criterion 1: Dijkstra `(dist, minhops)` against simple-path enumeration.
pub fn criterion_distance(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(1, "distance oracle", MINUTE);
    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 1, i);
            let g = sample_graph(&mut rng, 6, 3, i % 2 == 0, (0.2, 0.8));
            let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
            let truth = oracle::enumerate_simple_paths(&g);
            let n = g.vertex_count();
            for u in 0..n {
                for v in 0..n {
                    check(table.get(u, v) == truth[u][v], || {
                        format!("({u},{v}) got {:?} want {:?} in {}", table.get(u, v), truth[u][v], describe(&g))
                    })?;
                }
            }
            check(oracle::layered_table(&g) == truth, || format!("layered oracle disagrees on {}", describe(&g)))
        })
        .collect();
    tally.finish(results, "n <= 6, weights 1..=3, both orientations".into())
}

/// Criterion 2: certificates against the subset-enumeration ball check.
pub fn criterion_ball(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(2, "ball definition equivalence", NO_LIMIT);
    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 1, i);
            let g = sample_graph(&mut rng, 6, 3, i % 2 == 0, (0.2, 0.8));
            let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
            let truth = oracle::enumerate_simple_paths(&g);
            for k in 1..=3 {
                for rho in k + 1..=k + 3 {
                    let p = Params::new(k, rho).unwrap();
                    for u in 0..g.vertex_count() {
                        let got = ball_certificate(&table, p, u).has_ball;
                        let want = oracle::has_ball_by_subsets(&truth[u], p, u);
                        check(got == want, || {
                            format!("k={k} rho={rho} u={u}: got {got} want {want} in {}", describe(&g))
                        })?;
                    }
                }
            }
            Ok(())
        })
        .collect();
    tally.finish(results, "same sample as criterion 1, 1 <= k <= 3, k < rho <= k+3".into())
}

/// Criterion 3: adding legal shortcuts leaves every distance unchanged.
pub fn criterion_apply(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(3, "shortcuts preserve distances", NO_LIMIT);
    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 3, i);
            let g = sample_graph(&mut rng, 7, 4, i % 2 == 0, (0.2, 0.6));
            let cands = oracle::all_candidate_shortcuts(&g);
            let s: ShortcutSet = cands.into_iter().filter(|_| rng.gen_bool(0.4)).collect();
            let h = apply_shortcuts(&g, &s).map_err(|e| e.to_string())?;
            let before = oracle::layered_table(&g);
            let after = oracle::layered_table(&h);
            let n = g.vertex_count();
            for u in 0..n {
                for v in 0..n {
                    let (a, b) = (before[u][v].map(|x| x.dist), after[u][v].map(|x| x.dist));
                    check(a == b, || format!("dist({u},{v}) {a:?} -> {b:?} in {}", describe(&g)))?;
                }
            }
            Ok(())
        })
        .collect();
    tally.finish(results, "n <= 7, random subsets of all legal shortcuts".into())
}

/// Criterion 4: `rho <= k` needs nothing; `k = 1` matches the exhaustive optimum.
pub fn criterion_trivial(trivial: usize, k1: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(4, "trivial regimes", NO_LIMIT);
    let mut results: Vec<_> = (0..trivial)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 4, i);
            let g = sample_graph(&mut rng, 8, 4, i % 2 == 0, (0.1, 0.6));
            let k = rng.gen_range(1..=3);
            let p = Params::new(k, rng.gen_range(1..=k)).unwrap();
            let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
            let pool = CandidatePool::full(&g, &table);
            let exact = solve_exact(&g, p, &pool, ExactOptions::default()).map_err(|e| e.to_string())?;
            let greedy = solve_greedy(&g, p, &pool).map_err(|e| e.to_string())?;
            check(
                exact.shortcuts.is_empty() && greedy.shortcuts.is_empty(),
                || format!("rho <= k produced shortcuts on {}", describe(&g)),
            )?;
            check(oracle::deficient_by_definition(&g, p).is_empty(), || {
                format!("definition finds a deficient vertex with rho <= k on {}", describe(&g))
            })
        })
        .collect();
    let k1_results: Vec<_> = (0..k1)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 40, i);
            let g = sample_graph(&mut rng, 7, 3, i % 2 == 0, (0.15, 0.5));
            let rho = rng.gen_range(2..=3);
            let p = Params::new(1, rho).unwrap();
            let got = solve_k1(&g, rho).map_err(|e| e.to_string())?;
            let cands = oracle::all_candidate_shortcuts(&g);
            let best = oracle::exhaustive_min_shortcuts(&g, p, &cands, cands.len())
                .ok_or_else(|| format!("exhaustive search found nothing on {}", describe(&g)))?;
            check(got.shortcuts.len() == best.len(), || {
                format!("k=1 rho={rho}: got {} want {} on {}", got.shortcuts.len(), best.len(), describe(&g))
            })?;
            check(verify_shortcut_set(&g, p, &got.shortcuts).map(|v| v.valid) == Ok(true), || {
                format!("k=1 solution does not verify on {}", describe(&g))
            })
        })
        .collect();
    results.extend(k1_results);
    tally.finish(
        results,
        format!("{trivial} graphs with rho <= k, {k1} graphs with k = 1 and n <= 7"),
    )
}

fn sample_hypergraph(rng: &mut ChaCha8Rng, n_max: usize, m_max: usize, d: usize) -> Hypergraph {
    let n = rng.gen_range(d.max(1)..=n_max);
    let m = rng.gen_range(0..=m_max);
    random_hypergraph(n, m, d, rng.gen())
}

fn min_hitting(h: &Hypergraph) -> usize {
    oracle::brute_force_hitting_set(h.vertex_count(), h.hyperedges()).len()
}

const THM1_PARAMS: [(usize, usize); 3] = [(2, 4), (2, 5), (3, 5)];

/// Criterion 5: hitting-set optimum equals the shortcut optimum of the
/// reduced instance, in both orientations.
pub fn criterion_thm1_values(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(5, "hitting-set reduction value correspondence", 10 * MINUTE);
    let jobs: Vec<(usize, (usize, usize), bool)> = (0..samples)
        .flat_map(|i| THM1_PARAMS.into_iter().flat_map(move |kr| [(i, kr, true), (i, kr, false)]))
        .collect();
    let results: Vec<(bool, Result<(), String>)> = jobs
        .into_par_iter()
        .map(|(i, (k, rho), directed)| {
            let mut rng = rng_for(seed, 5, i);
            let h = sample_hypergraph(&mut rng, 6, 5, rho - k);
            let run = || -> Result<(), String> {
                let layout = reduce_thm1(&h, k, rho, directed).map_err(|e| e.to_string())?;
                let want = min_hitting(&h);
                let table = all_pairs_shortest_with_hops(&layout.graph).map_err(|e| e.to_string())?;
                let pool = CandidatePool::full(&layout.graph, &table);
                let got = solve_exact(&layout.graph, layout.roles.params(), &pool, ExactOptions::default())
                    .map_err(|e| e.to_string())?;
                check(got.shortcuts.len() == want, || {
                    format!(
                        "{} k={k} rho={rho} H={:?} (n={}): hitting {want}, shortcuts {} {:?}",
                        if directed { "directed" } else { "undirected" },
                        h.hyperedges(),
                        h.vertex_count(),
                        got.shortcuts.len(),
                        got.shortcuts.as_slice()
                    )
                })
            };
            (directed, run())
        })
        .collect();
    let miss = |d: bool| results.iter().filter(|(x, r)| *x == d && r.is_err()).count();
    let per = samples * THM1_PARAMS.len();
    let detail = format!(
        "directed {}/{per} equal, undirected {}/{per} equal",
        per - miss(true),
        per - miss(false)
    );
    tally.finish(results.into_iter().map(|(_, r)| r).collect(), detail)
}

/// Criterion 6: the reduced instances are deficient exactly at the path
/// starts, which see `rho - 1` vertices within `k` hops and a unique
/// rho-closest set.
pub fn criterion_thm1_localization(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(6, "deficiency localization in reduced instances", NO_LIMIT);
    let jobs: Vec<(usize, (usize, usize), bool)> = (0..samples)
        .flat_map(|i| THM1_PARAMS.into_iter().flat_map(move |kr| [(i, kr, true), (i, kr, false)]))
        .collect();
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(i, (k, rho), directed)| {
            let mut rng = rng_for(seed, 5, i);
            let h = sample_hypergraph(&mut rng, 6, 5, rho - k);
            let layout = reduce_thm1(&h, k, rho, directed).map_err(|e| e.to_string())?;
            let r = &layout.roles;
            let report = deficient_vertices(&layout.graph, r.params()).map_err(|e| e.to_string())?;
            let tag = if directed { "directed" } else { "undirected" };
            check(report.deficient == r.starts(), || {
                format!("{tag} k={k} rho={rho} H={:?}: X={:?} starts={:?}", h.hyperedges(), report.deficient, r.starts())
            })?;
            if !directed {
                return Ok(());
            }
            let table = all_pairs_shortest_with_hops(&layout.graph).map_err(|e| e.to_string())?;
            for s in r.starts() {
                let within = table.reachable(s).filter(|(_, pl)| pl.hops <= k).count();
                check(within == rho - 1, || {
                    format!("k={k} rho={rho} H={:?}: s={s} reaches {within} within k", h.hyperedges())
                })?;
                let union = rho_closest_union(&table, rho, s).len();
                check(union == rho, || {
                    format!("k={k} rho={rho} H={:?}: s={s} has {union} candidates for rho-closest", h.hyperedges())
                })?;
            }
            Ok(())
        })
        .collect();
    tally.finish(
        results,
        "X = {s_e} in both orientations; counts and uniqueness on directed instances".into(),
    )
}

fn structure_violations(ctx: &Kk1Context, k: usize) -> Result<(), String> {
    let mut k_paths: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &v in ctx.deficient() {
        let small = ctx.spt(v, k, TreeMode::Union).map_err(|e| e.to_string())?;
        let path = small.as_path().ok_or_else(|| format!("k-tree of {v} is not a path"))?;
        k_paths.insert(v, path);
        let union = ctx.spt(v, k + 1, TreeMode::Union).map_err(|e| e.to_string())?;
        check(union.height() == k + 1, || format!("(k+1)-tree of {v} has height {}", union.height()))?;
        let tie = ctx.spt(v, k + 1, TreeMode::Tiebroken).map_err(|e| e.to_string())?;
        check(tie.is_path(), || format!("tiebroken tree of {v} is not a path"))?;
        let b = ctx.tiebreak_candidates(v).map_err(|e| e.to_string())?.candidates;
        let dists: BTreeSet<_> = b.iter().map(|&u| ctx.table().dist(v, u)).collect();
        check(dists.len() <= 1, || format!("candidates of {v} lie at several distances"))?;
    }
    for (i, pi) in &k_paths {
        for (j, pj) in &k_paths {
            if i < j && pi.len() >= 2 && pj.len() >= 2 && pi[pi.len() - 2..] == pj[pj.len() - 2..] {
                let bi = ctx.tiebreak_candidates(*i).map_err(|e| e.to_string())?;
                let bj = ctx.tiebreak_candidates(*j).map_err(|e| e.to_string())?;
                check(bi.candidates == bj.candidates, || {
                    format!("k-paths of {i} and {j} share their end but candidates differ")
                })?;
            }
        }
    }
    let rsg = ctx.restricted_subgraph().map_err(|e| e.to_string())?;
    check(rsg.is_forest(ctx.table().vertex_count()), || "restricted subgraph has a cycle".into())
}

/// Indices of the first `samples` sparse instances (as drawn by the
/// criterion's rng stream) with at least one deficient vertex, and how many
/// indices were scanned to find them.
fn nontrivial_indices(samples: usize, seed: u64, criterion: u8, n_max: usize) -> (Vec<usize>, usize) {
    let mut picked = Vec::with_capacity(samples);
    let mut i = 0;
    while picked.len() < samples {
        let mut rng = rng_for(seed, criterion, i);
        let g = sample_sparse(&mut rng, 3, n_max, 4, (0.0, 0.25));
        let k = 2 + i % 2;
        let report = deficient_vertices(&g, Params::new(k, k + 1).unwrap()).expect("small weights");
        if !report.deficient.is_empty() {
            picked.push(i);
        }
        i += 1;
    }
    (picked, i)
}

/// Criterion 7: tree and forest structure of the `rho = k + 1` pipeline.
pub fn criterion_structure(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(7, "tree and forest structure for rho = k+1", NO_LIMIT);
    let (indices, scanned) = nontrivial_indices(samples, seed, 7, 10);
    let results: Vec<Result<(), String>> = indices
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 7, i);
            let g = sample_sparse(&mut rng, 3, 10, 4, (0.0, 0.25));
            let k = 2 + i % 2;
            let phi = VertexOrdering::random(g.vertex_count(), rng.gen());
            let ctx = Kk1Context::new(&g, Params::new(k, k + 1).unwrap(), Some(phi)).map_err(|e| e.to_string())?;
            structure_violations(&ctx, k).map_err(|e| format!("k={k}: {e} in {}", describe(&g)))
        })
        .collect();
    tally.finish(
        results,
        format!("instances with deficient vertices ({scanned} sampled), n <= 10, weights <= 4, k in {{2, 3}}"),
    )
}

/// A valid set containing a random part of the candidate pool.
fn random_valid_set(g: &WeightedGraph, p: Params, rng: &mut ChaCha8Rng) -> Result<ShortcutSet, String> {
    let table = all_pairs_shortest_with_hops(g).map_err(|e| e.to_string())?;
    let pool = CandidatePool::full(g, &table);
    let mut s: ShortcutSet = pool.candidates.iter().copied().filter(|_| rng.gen_bool(0.2)).collect();
    let h = apply_shortcuts(g, &s).map_err(|e| e.to_string())?;
    let h_table = all_pairs_shortest_with_hops(&h).map_err(|e| e.to_string())?;
    let rest = CandidatePool::full(&h, &h_table);
    let fill = match solve_greedy(&h, p, &rest) {
        Ok(r) => r.shortcuts.iter().copied().collect::<Vec<_>>(),
        Err(SolveError::Stalled { .. }) => rest.candidates.clone(),
        Err(e) => return Err(e.to_string()),
    };
    for sc in fill {
        s.insert(sc);
    }
    Ok(s)
}

/// Criterion 8: hop-2 normalization keeps validity and never grows a set.
pub fn criterion_normalize(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(8, "hop-2 normalization", NO_LIMIT);
    let results: Vec<(bool, Result<(), String>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 8, i);
            let g = sample_sparse(&mut rng, 3, 9, 4, (0.0, 0.25));
            let k = 2 + i % 2;
            let p = Params::new(k, k + 1).unwrap();
            let run = |rng: &mut ChaCha8Rng| -> Result<bool, String> {
                let s = random_valid_set(&g, p, rng)?;
                check(verify_shortcut_set(&g, p, &s).map(|v| v.valid) == Ok(true), || {
                    format!("generated set is not valid on {}", describe(&g))
                })?;
                let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
                let moved = s.iter().any(|sc| table.hops(sc.u, sc.v) != Some(2));
                let t = normalize_to_hop2(&g, p, &s).map_err(|e| format!("{e} on {}", describe(&g)))?;
                check(t.iter().all(|sc| table.hops(sc.u, sc.v) == Some(2)), || {
                    format!("k={k}: non hop-2 shortcut left in {:?} on {}", t.as_slice(), describe(&g))
                })?;
                check(t.len() <= s.len(), || format!("k={k}: grew from {} to {}", s.len(), t.len()))?;
                check(verify_shortcut_set(&g, p, &t).map(|v| v.valid) == Ok(true), || {
                    format!("k={k}: normalized set does not verify on {}", describe(&g))
                })?;
                Ok(moved)
            };
            match run(&mut rng) {
                Ok(moved) => (moved, Ok(())),
                Err(e) => (false, Err(e)),
            }
        })
        .collect();
    let moved = results.iter().filter(|(x, _)| *x).count();
    tally.finish(
        results.into_iter().map(|(_, r)| r).collect(),
        format!("{moved} sets contained shortcuts spanning more than two hops"),
    )
}

/// Criterion 9: the restricted pipeline matches the unrestricted optimum
/// under many vertex orderings.
pub fn criterion_kk1(samples: usize, seed: u64) -> CriterionOutcome {
    const ORDERINGS: usize = 10;
    let tally = Tally::new(9, "restricted pipeline optimality", 10 * MINUTE);
    let (indices, scanned) = nontrivial_indices(samples, seed, 9, 9);
    let results: Vec<(usize, Result<(), String>)> = indices
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 9, i);
            let g = sample_sparse(&mut rng, 3, 9, 4, (0.0, 0.25));
            let k = 2 + i % 2;
            let p = Params::new(k, k + 1).unwrap();
            let run = |rng: &mut ChaCha8Rng| -> Result<usize, String> {
                let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
                let pool = CandidatePool::full(&g, &table);
                let want = solve_exact(&g, p, &pool, ExactOptions::default())
                    .map_err(|e| e.to_string())?
                    .shortcuts
                    .len();
                let n = g.vertex_count();
                let mut orderings = vec![VertexOrdering::identity(n)];
                orderings.extend((0..ORDERINGS).map(|_| VertexOrdering::random(n, rng.gen())));
                for phi in orderings {
                    let got = Kk1Context::new(&g, p, Some(phi.clone()))
                        .and_then(|ctx| ctx.solve())
                        .map_err(|e| format!("{e} on {}", describe(&g)))?;
                    check(got.shortcuts.len() == want, || {
                        format!("k={k}: restricted {} vs exact {want} on {}", got.shortcuts.len(), describe(&g))
                    })?;
                }
                Ok(want)
            };
            match run(&mut rng) {
                Ok(size) => (size, Ok(())),
                Err(e) => (0, Err(e)),
            }
        })
        .collect();
    let nontrivial = results.iter().filter(|(s, _)| *s > 0).count();
    let largest = results.iter().map(|(s, _)| *s).max().unwrap_or(0);
    tally.finish(
        results.into_iter().map(|(_, r)| r).collect(),
        format!(
            "{nontrivial} instances with deficient vertices ({scanned} sampled), largest optimum {largest}, identity plus {ORDERINGS} random orderings each"
        ),
    )
}

const TIEBREAK_PARAMS: [(usize, usize); 3] = [(2, 5), (2, 6), (3, 6)];

/// Criterion 10: the tiebreaker construction and the extraction map.
pub fn criterion_tiebreaker(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(10, "tiebreaker reduction sanity", NO_LIMIT);
    let jobs: Vec<(usize, (usize, usize))> = (0..samples)
        .flat_map(|i| TIEBREAK_PARAMS.into_iter().map(move |kr| (i, kr)))
        .collect();
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(i, (k, rho))| {
            let mut rng = rng_for(seed, 10, i);
            let d = (rho - k + 1) / 2;
            let h = sample_hypergraph(&mut rng, 5, 4, d);
            let tag = format!("k={k} rho={rho} H={:?} n={}", h.hyperedges(), h.vertex_count());
            let layout = reduce_tiebreaker(&h, k, rho, true).map_err(|e| e.to_string())?;
            let r = &layout.roles;
            let report = deficient_vertices(&layout.graph, r.params()).map_err(|e| e.to_string())?;
            check(report.deficient == r.starts(), || format!("{tag}: X={:?}", report.deficient))?;
            let table = all_pairs_shortest_with_hops(&layout.graph).map_err(|e| e.to_string())?;
            for s in r.starts() {
                let within = table.reachable(s).filter(|(_, pl)| pl.hops <= k).count();
                check(within == rho - 1, || format!("{tag}: s={s} reaches {within} within k"))?;
            }
            let pool = CandidatePool::full(&layout.graph, &table);
            let best = solve_exact(&layout.graph, r.params(), &pool, ExactOptions::default())
                .map_err(|e| format!("{tag}: {e}"))?;
            let assignments = assignments_from_shortcuts(&layout, &best.shortcuts).map_err(|e| format!("{tag}: {e}"))?;
            let u = extract_hitting_from_tiebreak(&layout, &assignments).map_err(|e| format!("{tag}: {e}"))?;
            check(r.padded.is_hitting_set(&u.vertices), || format!("{tag}: {:?} is not hitting", u.vertices))?;
            let want = min_hitting(&h);
            check(u.len() == want, || format!("{tag}: extracted {} want {want}", u.len()))
        })
        .collect();
    tally.finish(results, "directed constructions, (k, rho) in {(2,5), (2,6), (3,6)}".into())
}

/// Format half of criterion 11: `parse(write(x)) == x` for every file type.
pub fn criterion_formats(samples: usize, seed: u64) -> CriterionOutcome {
    let tally = Tally::new(11, "format round trips", NO_LIMIT);
    let results: Vec<_> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, 11, i);
            let directed = rng.gen();
            let g = sample_graph(&mut rng, 12, 1000, directed, (0.0, 0.7));
            let text = format::write_graph(&g);
            check(format::parse_graph(&text).as_ref() == Ok(&g), || format!("graph round trip failed: {text}"))?;
            let d = rng.gen_range(1..=4);
            let h = sample_hypergraph(&mut rng, 8, 6, d);
            let text = format::write_hypergraph(&h);
            check(format::parse_hypergraph(&text).as_ref() == Ok(&h), || {
                format!("hypergraph round trip failed: {text}")
            })?;
            let n = g.vertex_count();
            let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
            pairs.shuffle(&mut rng);
            let count = rng.gen_range(0..=6);
            let s: ShortcutSet = pairs
                .into_iter()
                .take(count)
                .map(|(u, v)| Shortcut::new(u, v, rng.gen_range(1..=50)))
                .collect();
            let text = format::write_shortcuts(&s);
            check(format::parse_shortcuts(&text, n).as_ref() == Ok(&s), || {
                format!("shortcut round trip failed: {text}")
            })
        })
        .collect();
    tally.finish(results, "graphs, hypergraphs and shortcut lists".into())
}

/// Every library-level criterion with the given sizes.
pub fn run_all(sizes: Sizes, seed: u64) -> Vec<CriterionOutcome> {
    vec![
        criterion_distance(sizes.distance, seed),
        criterion_ball(sizes.distance, seed),
        criterion_apply(sizes.apply, seed),
        criterion_trivial(sizes.trivial, sizes.k1, seed),
        criterion_thm1_values(sizes.thm1, seed),
        criterion_thm1_localization(sizes.thm1, seed),
        criterion_structure(sizes.structure, seed),
        criterion_normalize(sizes.normalize, seed),
        criterion_kk1(sizes.kk1, seed),
        criterion_tiebreaker(sizes.tiebreaker, seed),
        criterion_formats(sizes.formats, seed),
    ]
}
