//! Minimum-shortcut solvers: exact iterative deepening, a greedy heuristic,
//! and the polynomial algorithm for `k = 1`.
//!
//! All of them rely on one fact: adding shortcuts never changes weight
//! distances, only hop counts. A shortcut can therefore influence the ball
//! of `x` only if both endpoints lie in `{x}` plus the rho-closest union of
//! `x` and the shortcut lies on a shortest path out of `x`. The search uses
//! that relevance relation to branch and to bound.

use std::collections::BTreeSet;

use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    all_pairs_shortest_with_hops, ball_certificate, certificate_from_row, rho_closest_union, single_source_with_hops,
    DistanceTable, GraphError, Params, PathLen, Vertex, WeightedGraph,
};
use crate::shortcut::{augment, check_shortcut, Shortcut, ShortcutError, ShortcutSet};

/// Node cap used when the caller does not supply one.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no subset of the candidate pool of size at most {limit} works")]
    InfeasibleWithinPool { limit: usize },
    #[error("search exceeded the cap of {cap} explored nodes")]
    SearchBudgetExceeded { cap: u64 },
    #[error("greedy stalled with {remaining} deficient vertices left")]
    Stalled { remaining: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolOrigin {
    Full,
    Kk1Restricted,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidatePool {
    pub candidates: Vec<Shortcut>,
    pub origin: PoolOrigin,
}

impl CandidatePool {
    /// Every legal shortcut of `g`, lexicographically ordered.
    pub fn full(g: &WeightedGraph, table: &DistanceTable) -> Self {
        let n = g.vertex_count();
        let mut candidates = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u == v || (!g.is_directed() && v < u) {
                    continue;
                }
                if let Some(pl) = table.get(u, v) {
                    if pl.hops > 1 {
                        candidates.push(Shortcut::new(u, v, pl.dist));
                    }
                }
            }
        }
        Self {
            candidates,
            origin: PoolOrigin::Full,
        }
    }

    pub fn restricted(mut candidates: Vec<Shortcut>, origin: PoolOrigin) -> Self {
        candidates.sort();
        candidates.dedup();
        Self { candidates, origin }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub shortcuts: ShortcutSet,
    /// Minimality was proved over the candidate pool that was searched.
    pub optimal: bool,
    pub explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest solution size to try; defaults to the pool size.
    pub limit: Option<usize>,
    pub node_cap: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            limit: None,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// Shared bookkeeping: the base distance table, canonical candidates and,
/// per vertex, the candidates able to influence its ball.
struct Instance<'a> {
    g: &'a WeightedGraph,
    table: DistanceTable,
    p: Params,
    candidates: Vec<Shortcut>,
    relevant: Vec<Vec<usize>>,
    support: Vec<BTreeSet<Vertex>>,
}

impl<'a> Instance<'a> {
    fn new(g: &'a WeightedGraph, p: Params, pool: &CandidatePool) -> Result<Self, SolveError> {
        let table = all_pairs_shortest_with_hops(g)?;
        let mut candidates = Vec::with_capacity(pool.candidates.len());
        for c in &pool.candidates {
            candidates.push(check_shortcut(g, &table, c)?);
        }
        candidates.sort();
        candidates.dedup();
        let n = g.vertex_count();
        let support: Vec<BTreeSet<Vertex>> = (0..n)
            .map(|x| {
                let mut s = rho_closest_union(&table, p.rho, x);
                s.insert(x);
                s
            })
            .collect();
        let on_path = |x: Vertex, a: Vertex, b: Vertex, w| match (table.dist(x, a), table.dist(x, b)) {
            (Some(da), Some(db)) => da + w == db,
            _ => false,
        };
        let relevant = (0..n)
            .map(|x| {
                candidates
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| {
                        support[x].contains(&c.u)
                            && support[x].contains(&c.v)
                            && (on_path(x, c.u, c.v, c.weight)
                                || (!g.is_directed() && on_path(x, c.v, c.u, c.weight)))
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(Self {
            g,
            table,
            p,
            candidates,
            relevant,
            support,
        })
    }

    fn augmented(&self, chosen: &[usize]) -> WeightedGraph {
        augment(self.g, chosen.iter().map(|&i| &self.candidates[i]))
    }

    fn has_ball(&self, h: &WeightedGraph, x: Vertex) -> Result<bool, SolveError> {
        Ok(self.row_has_ball(&single_source_with_hops(h, x)?, x))
    }

    fn row_has_ball(&self, row: &[Option<PathLen>], x: Vertex) -> bool {
        certificate_from_row(row, self.p, x).has_ball
    }

    /// Sum over the rho-closest union of hops in excess of `k`.
    fn excess(&self, h: &WeightedGraph, x: Vertex) -> Result<usize, SolveError> {
        let row = single_source_with_hops(h, x)?;
        Ok(self.support[x]
            .iter()
            .filter_map(|&y| row[y].map(|pl| pl.hops.saturating_sub(self.p.k)))
            .sum())
    }

    fn result(&self, chosen: &[usize], optimal: bool, explored: u64) -> SolveResult {
        SolveResult {
            shortcuts: chosen.iter().map(|&i| self.candidates[i]).collect(),
            optimal,
            explored,
        }
    }
}

struct Search<'i, 'a> {
    inst: &'i Instance<'a>,
    explored: u64,
    cap: u64,
    chosen: Vec<usize>,
    blocked: Vec<bool>,
}

impl Search<'_, '_> {
    /// Depth-limited search; `deficient` is the deficient set of the graph
    /// augmented with `self.chosen`.
    fn dfs(&mut self, deficient: &[Vertex], budget: usize) -> Result<bool, SolveError> {
        self.explored += 1;
        if self.explored > self.cap {
            return Err(SolveError::SearchBudgetExceeded { cap: self.cap });
        }
        if deficient.is_empty() {
            return Ok(true);
        }
        if budget == 0 {
            return Ok(false);
        }
        let inst = self.inst;
        let open = |c: usize| !self.blocked[c];
        let mut hits = vec![0usize; inst.candidates.len()];
        let mut branch_vertex = None;
        let mut fewest = usize::MAX;
        for &x in deficient {
            let mut count = 0;
            for &c in &inst.relevant[x] {
                if open(c) {
                    hits[c] += 1;
                    count += 1;
                }
            }
            if count == 0 {
                return Ok(false);
            }
            if count < fewest {
                fewest = count;
                branch_vertex = Some(x);
            }
        }
        let best_hit = *hits.iter().max().unwrap();
        if deficient.len() > best_hit * budget {
            return Ok(false);
        }
        let x = branch_vertex.unwrap();
        let options: Vec<usize> = inst.relevant[x].iter().copied().filter(|&c| open(c)).collect();
        for &c in &options {
            self.chosen.push(c);
            self.blocked[c] = true;
            let h = inst.augmented(&self.chosen);
            let mut next = Vec::with_capacity(deficient.len());
            for &y in deficient {
                if !inst.relevant[y].contains(&c) || !inst.has_ball(&h, y)? {
                    next.push(y);
                }
            }
            if self.dfs(&next, budget - 1)? {
                // `chosen` now holds the solution; the search is over.
                return Ok(true);
            }
            // Later siblings must not pick `c` again.
            self.chosen.pop();
        }
        for c in options {
            self.blocked[c] = false;
        }
        Ok(false)
    }
}

/// Minimum-cardinality subset of `pool` turning `g` into a (k, rho)-graph.
pub fn solve_exact(
    g: &WeightedGraph,
    p: Params,
    pool: &CandidatePool,
    opts: ExactOptions,
) -> Result<SolveResult, SolveError> {
    let inst = Instance::new(g, p, pool)?;
    let deficient: Vec<Vertex> = (0..g.vertex_count())
        .filter(|&x| !ball_certificate(&inst.table, p, x).has_ball)
        .collect();
    let limit = opts.limit.unwrap_or(inst.candidates.len());
    let mut search = Search {
        inst: &inst,
        explored: 0,
        cap: opts.node_cap,
        chosen: Vec::new(),
        blocked: vec![false; inst.candidates.len()],
    };
    for budget in 0..=limit {
        search.blocked.iter_mut().for_each(|b| *b = false);
        if search.dfs(&deficient, budget)? {
            let chosen = std::mem::take(&mut search.chosen);
            return Ok(inst.result(&chosen, true, search.explored));
        }
        debug_assert!(search.chosen.is_empty());
    }
    Err(SolveError::InfeasibleWithinPool { limit })
}

/// Greedy heuristic: repeatedly add the candidate that gives the most
/// deficient vertices a ball. When no single candidate completes any ball,
/// fall back to the candidate that most reduces the total number of hops
/// above `k` within the rho-closest unions.
pub fn solve_greedy(
    g: &WeightedGraph,
    p: Params,
    pool: &CandidatePool,
) -> Result<SolveResult, SolveError> {
    let inst = Instance::new(g, p, pool)?;
    let mut deficient: Vec<Vertex> = (0..g.vertex_count())
        .filter(|&x| !ball_certificate(&inst.table, p, x).has_ball)
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut explored = 0u64;
    while !deficient.is_empty() {
        let current = inst.augmented(&chosen);
        let mut best: Option<(usize, usize)> = None;
        for c in 0..inst.candidates.len() {
            if chosen.contains(&c) {
                continue;
            }
            explored += 1;
            let touched: Vec<Vertex> = deficient
                .iter()
                .copied()
                .filter(|&x| inst.relevant[x].contains(&c))
                .collect();
            if touched.is_empty() {
                continue;
            }
            let h = augment(&current, [&inst.candidates[c]]);
            let mut fixed = 0;
            for &x in &touched {
                if inst.has_ball(&h, x)? {
                    fixed += 1;
                }
            }
            if fixed > best.map_or(0, |b| b.1) {
                best = Some((c, fixed));
            }
        }
        if best.is_none() {
            let mut before = vec![0usize; g.vertex_count()];
            for &x in &deficient {
                before[x] = inst.excess(&current, x)?;
            }
            for c in 0..inst.candidates.len() {
                if chosen.contains(&c) {
                    continue;
                }
                let touched: Vec<Vertex> = deficient
                    .iter()
                    .copied()
                    .filter(|&x| inst.relevant[x].contains(&c))
                    .collect();
                if touched.is_empty() {
                    continue;
                }
                let h = augment(&current, [&inst.candidates[c]]);
                let mut gain = 0;
                for &x in &touched {
                    gain += before[x] - inst.excess(&h, x)?;
                }
                if gain > best.map_or(0, |b| b.1) {
                    best = Some((c, gain));
                }
            }
        }
        let Some((c, _)) = best else {
            return Err(SolveError::Stalled {
                remaining: deficient.len(),
            });
        };
        chosen.push(c);
        let h = inst.augmented(&chosen);
        let mut still = Vec::with_capacity(deficient.len());
        for &x in &deficient {
            if !inst.relevant[x].contains(&c) || !inst.has_ball(&h, x)? {
                still.push(x);
            }
        }
        deficient = still;
    }
    Ok(inst.result(&chosen, false, explored))
}

/// Minimum (1, rho)-shortcut set.
///
/// Every vertex strictly inside its radius must become adjacent, which
/// forces those shortcuts. At the radius a vertex needs some number of
/// additional neighbors among its tied candidates, preferring ones already
/// adjacent. In undirected graphs a single shortcut can serve both of its
/// endpoints when each lies on the other's boundary, so the remaining
/// demand is minimized by a maximum b-matching over such mutual pairs.
pub fn solve_k1(g: &WeightedGraph, rho: usize) -> Result<SolveResult, SolveError> {
    let p = Params::new(1, rho)?;
    let table = all_pairs_shortest_with_hops(g)?;
    let n = g.vertex_count();
    let mut forced: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut boundary: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut needed = vec![0usize; n];
    for u in 0..n {
        let cert = ball_certificate(&table, p, u);
        for (v, pl) in table.reachable(u) {
            if pl.dist < cert.radius && pl.hops > 1 {
                forced.insert(g.pair_key(u, v));
            } else if pl.dist == cert.radius && cert.boundary_needed > 0 {
                boundary[u].push(v);
            }
        }
        needed[u] = cert.boundary_needed;
    }
    let served = |u: Vertex, v: Vertex, extra: &BTreeSet<(Vertex, Vertex)>| {
        table.hops(u, v) == Some(1) || forced.contains(&g.pair_key(u, v)) || extra.contains(&g.pair_key(u, v))
    };
    let none = BTreeSet::new();
    let mut residual = vec![0usize; n];
    let mut open: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for u in 0..n {
        let have = boundary[u].iter().filter(|&&v| served(u, v, &none)).count();
        residual[u] = needed[u].saturating_sub(have);
        if residual[u] > 0 {
            open[u] = boundary[u].iter().copied().filter(|&v| !served(u, v, &none)).collect();
        }
    }
    let mut extra: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    if !g.is_directed() {
        for (u, v) in mutual_b_matching(&residual, &open) {
            extra.insert(g.pair_key(u, v));
        }
    }
    for u in 0..n {
        let mut have = boundary[u].iter().filter(|&&v| served(u, v, &extra)).count();
        for &v in &open[u] {
            if have >= needed[u] {
                break;
            }
            if extra.insert(g.pair_key(u, v)) {
                have += 1;
            }
        }
    }
    let shortcuts = forced
        .iter()
        .chain(extra.iter())
        .map(|&(u, v)| Shortcut::new(u, v, table.dist(u, v).expect("reachable")))
        .collect();
    Ok(SolveResult {
        shortcuts,
        optimal: true,
        explored: 0,
    })
}

/// Maximum set of pairs `{u, v}` with `v` in `open[u]` and `u` in `open[v]`
/// such that each `u` appears in at most `capacity[u]` pairs.
///
/// Reduced to ordinary matching: `capacity[u]` copies of each vertex and a
/// two-node gadget per pair, so that a maximum matching has size
/// `#pairs + max b-matching`.
fn mutual_b_matching(capacity: &[usize], open: &[Vec<Vertex>]) -> Vec<(Vertex, Vertex)> {
    let n = capacity.len();
    let mut pairs = Vec::new();
    for u in 0..n {
        for &v in &open[u] {
            if u < v && capacity[u] > 0 && capacity[v] > 0 && open[v].contains(&u) {
                pairs.push((u, v));
            }
        }
    }
    if pairs.is_empty() {
        return pairs;
    }
    let mut aux: UnGraph<(), ()> = UnGraph::new_undirected();
    let copies: Vec<Vec<NodeIndex>> = capacity
        .iter()
        .map(|&c| (0..c).map(|_| aux.add_node(())).collect())
        .collect();
    let mut gadgets = Vec::with_capacity(pairs.len());
    for &(u, v) in &pairs {
        let a = aux.add_node(());
        let b = aux.add_node(());
        aux.add_edge(a, b, ());
        for &cu in &copies[u] {
            aux.add_edge(cu, a, ());
        }
        for &cv in &copies[v] {
            aux.add_edge(cv, b, ());
        }
        gadgets.push((a, b));
    }
    let matching = maximum_matching(&aux);
    pairs
        .into_iter()
        .zip(gadgets)
        .filter(|&(_, (a, b))| matching.mate(a) != Some(b) && matching.contains_node(a) && matching.contains_node(b))
        .map(|(pair, _)| pair)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shortcut::verify_shortcut_set;

    fn path(n: usize, directed: bool) -> WeightedGraph {
        WeightedGraph::from_edges(n, directed, (1..n).map(|i| (i - 1, i, 1))).unwrap()
    }

    fn full(g: &WeightedGraph) -> CandidatePool {
        CandidatePool::full(g, &all_pairs_shortest_with_hops(g).unwrap())
    }

    fn p(k: usize, rho: usize) -> Params {
        Params::new(k, rho).unwrap()
    }

    #[test]
    fn exact_on_p5() {
        let g = path(5, true);
        let r = solve_exact(&g, p(2, 3), &full(&g), ExactOptions::default()).unwrap();
        assert_eq!(r.shortcuts.as_slice(), &[Shortcut::new(1, 3, 2)]);
        assert!(r.optimal);
        assert!(verify_shortcut_set(&g, p(2, 3), &r.shortcuts).unwrap().valid);
        let g = path(5, false);
        let r = solve_exact(&g, p(2, 3), &full(&g), ExactOptions::default()).unwrap();
        assert_eq!(r.shortcuts.as_slice(), &[Shortcut::new(1, 3, 2)]);
    }

    #[test]
    fn exact_on_krho_graph_is_empty() {
        let g = path(3, false);
        let r = solve_exact(&g, p(2, 3), &full(&g), ExactOptions::default()).unwrap();
        assert!(r.shortcuts.is_empty() && r.optimal);
    }

    #[test]
    fn exact_reports_restrictive_pool_and_cap() {
        let g = path(5, true);
        let pool = CandidatePool::restricted(vec![Shortcut::new(0, 2, 2)], PoolOrigin::Custom);
        assert_eq!(
            solve_exact(&g, p(2, 3), &pool, ExactOptions::default()),
            Err(SolveError::InfeasibleWithinPool { limit: 1 })
        );
        let opts = ExactOptions {
            limit: None,
            node_cap: 1,
        };
        assert!(matches!(
            solve_exact(&g, p(2, 3), &full(&g), opts),
            Err(SolveError::SearchBudgetExceeded { .. })
        ));
    }

    #[test]
    fn greedy_on_p5() {
        let g = path(5, false);
        let r = solve_greedy(&g, p(2, 3), &full(&g)).unwrap();
        assert_eq!(r.shortcuts.len(), 1);
        assert!(!r.optimal);
        let g = path(3, true);
        assert!(solve_greedy(&g, p(2, 3), &full(&g)).unwrap().shortcuts.is_empty());
    }

    #[test]
    fn greedy_progresses_when_no_single_shortcut_completes_a_ball() {
        // Vertex 0 of a long directed path needs two shortcuts at once.
        let g = path(7, true);
        let params = p(2, 5);
        let r = solve_greedy(&g, params, &full(&g)).unwrap();
        assert!(verify_shortcut_set(&g, params, &r.shortcuts).unwrap().valid);
    }

    #[test]
    fn greedy_stalls_on_useless_pool() {
        let g = path(5, true);
        // (2, 4) fixes vertex 1 but nothing in the pool helps vertex 0.
        let pool = CandidatePool::restricted(vec![Shortcut::new(2, 4, 2)], PoolOrigin::Custom);
        assert_eq!(
            solve_greedy(&g, p(2, 3), &pool),
            Err(SolveError::Stalled { remaining: 1 })
        );
    }

    #[test]
    fn k1_examples() {
        let g = path(3, true);
        let r = solve_k1(&g, 2).unwrap();
        assert_eq!(r.shortcuts.as_slice(), &[Shortcut::new(0, 2, 2)]);
        let mut k5 = WeightedGraph::new(5, false);
        for u in 0..5 {
            for v in u + 1..5 {
                k5.add_edge(u, v, 1).unwrap();
            }
        }
        assert!(solve_k1(&k5, 3).unwrap().shortcuts.is_empty());
    }

    #[test]
    fn k1_star_undirected_and_directed() {
        let star = WeightedGraph::from_edges(5, false, (1..5).map(|l| (0, l, 1))).unwrap();
        let r = solve_k1(&star, 4).unwrap();
        assert_eq!(r.shortcuts.len(), 6);
        assert!(verify_shortcut_set(&star, p(1, 4), &r.shortcuts).unwrap().valid);
        let both = WeightedGraph::from_edges(
            5,
            true,
            (1..5).flat_map(|l| [(0, l, 1), (l, 0, 1)]),
        )
        .unwrap();
        assert_eq!(solve_k1(&both, 4).unwrap().shortcuts.len(), 12);
    }

    #[test]
    fn k1_uses_mutual_boundary_pairs() {
        // Three leaves each need one of two tied leaves: two shortcuts do.
        let star = WeightedGraph::from_edges(4, false, (1..4).map(|l| (0, l, 1))).unwrap();
        let r = solve_k1(&star, 2).unwrap();
        assert_eq!(r.shortcuts.len(), 2);
        assert!(verify_shortcut_set(&star, p(1, 2), &r.shortcuts).unwrap().valid);
    }
}
