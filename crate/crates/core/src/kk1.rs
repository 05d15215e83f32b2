//! The undirected `rho = k + 1` pipeline.
//!
//! For every deficient vertex we build fewest-hop shortest-path trees over
//! its rho-closest neighbors, break boundary ties with a vertex ordering to
//! obtain one demand path per deficient vertex, and restrict the candidate
//! shortcuts to the two-hop spans ("cherries") along those paths. The union
//! of demand paths is always a forest; the structural facts this relies on
//! are checked at runtime and reported as [`Kk1Error::StructureViolation`].
//!
//! The restricted cover instance is solved exactly by branch and bound, so
//! results are minimum over the restricted candidates. That is usually the
//! global minimum, but not always: a two-hop shortcut can serve two deficient
//! vertices from opposite ends while lying on neither of their demand paths,
//! and then the answer depends on the ordering.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    all_pairs_shortest_with_hops, deficiency_from_table, rho_closest_union, DeficiencyReport,
    DistanceTable, GraphError, Params, Vertex, WeightedGraph,
};
use crate::shortcut::{coverage_with_table, make_shortcut, verify_with_table, Shortcut, ShortcutError};
use crate::solvers::{SolveResult, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Kk1Error {
    #[error("vertex {0} already has a (k, k+1)-ball")]
    NotDeficient(Vertex),
    #[error("the (k, k+1) pipeline needs an undirected graph")]
    RequiresUndirected,
    #[error("the (k, k+1) pipeline needs rho = k + 1 (got k={k}, rho={rho})")]
    RequiresRhoKPlus1 { k: usize, rho: usize },
    #[error("ordering must be a permutation of 0..{0}")]
    InvalidOrdering(usize),
    #[error("structure violation (implementation bug): {0}")]
    StructureViolation(String),
    #[error("set-cover search exceeded the cap of {0} nodes")]
    SearchBudgetExceeded(u64),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A strict total order on the vertices, given as a rank per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexOrdering {
    rank: Vec<usize>,
}

impl VertexOrdering {
    pub fn identity(n: usize) -> Self {
        Self {
            rank: (0..n).collect(),
        }
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<Self, Kk1Error> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(Kk1Error::InvalidOrdering(n));
            }
        }
        Ok(Self { rank })
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { rank }
    }

    pub fn rank(&self, v: Vertex) -> usize {
        self.rank[v]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeMode {
    /// Spans every vertex of every rho-closest neighbor set.
    Union,
    /// Spans the `rho` first vertices by `(dist, rank)`.
    Tiebroken,
}

/// Fewest-hop shortest-path tree from `root` to a set of close vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstrainedSpt {
    pub root: Vertex,
    pub mode: TreeMode,
    /// `(parent, child)` pairs, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Hop depth of every tree vertex, root at 0.
    pub levels: BTreeMap<Vertex, usize>,
}

impl ConstrainedSpt {
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.levels.keys().copied().collect()
    }

    pub fn height(&self) -> usize {
        self.levels.values().copied().max().unwrap_or(0)
    }

    pub fn is_path(&self) -> bool {
        let mut children: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &(parent, _) in &self.edges {
            *children.entry(parent).or_default() += 1;
        }
        children.values().all(|&c| c <= 1)
    }

    /// Root-to-leaf vertex sequence if the tree is a path.
    pub fn as_path(&self) -> Option<Vec<Vertex>> {
        if !self.is_path() {
            return None;
        }
        let mut by_level: Vec<(usize, Vertex)> = self.levels.iter().map(|(&v, &l)| (l, v)).collect();
        by_level.sort();
        Some(by_level.into_iter().map(|(_, v)| v).collect())
    }
}

/// Builds the tree over the `tree_rho` closest neighbors of `v`.
///
/// Parents are chosen among predecessors on fewest-hop shortest paths by
/// `(dist, hops, rank)`, which makes the tree unique.
pub fn constrained_spt(
    g: &WeightedGraph,
    table: &DistanceTable,
    tree_rho: usize,
    v: Vertex,
    mode: TreeMode,
    phi: &VertexOrdering,
) -> Result<ConstrainedSpt, Kk1Error> {
    let union = rho_closest_union(table, tree_rho, v);
    let targets: BTreeSet<Vertex> = match mode {
        TreeMode::Union => union,
        TreeMode::Tiebroken => {
            let mut ranked: Vec<Vertex> = union.into_iter().collect();
            ranked.sort_by_key(|&u| (table.dist(v, u), phi.rank(u)));
            ranked.into_iter().take(tree_rho).collect()
        }
    };
    let mut levels = BTreeMap::from([(v, 0)]);
    let mut edges = BTreeSet::new();
    for &t in &targets {
        let mut y = t;
        while y != v && !levels.contains_key(&y) {
            let here = table.get(v, y).expect("target is reachable");
            levels.insert(y, here.hops);
            let parent = g
                .neighbors(y)
                .iter()
                .filter_map(|&(x, w)| {
                    let px = table.get(v, x)?;
                    (px.dist + w == here.dist && px.hops + 1 == here.hops)
                        .then_some((px.dist, px.hops, phi.rank(x), x))
                })
                .min()
                .map(|(_, _, _, x)| x)
                .ok_or_else(|| {
                    Kk1Error::StructureViolation(format!("no shortest-path parent for {y} from {v}"))
                })?;
            edges.insert((parent, y));
            y = parent;
        }
    }
    let spanned: BTreeSet<Vertex> = levels.keys().copied().filter(|&u| u != v).collect();
    if spanned != targets {
        return Err(Kk1Error::StructureViolation(format!(
            "tree of {v} leaves its target set"
        )));
    }
    Ok(ConstrainedSpt {
        root: v,
        mode,
        edges: edges.into_iter().collect(),
        levels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiebreakCandidates {
    pub vertex: Vertex,
    pub candidates: BTreeSet<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedSubgraph {
    /// Undirected edges as `(min, max)`.
    pub edges: BTreeSet<(Vertex, Vertex)>,
    pub demand_paths: BTreeMap<Vertex, Vec<Vertex>>,
}

impl RestrictedSubgraph {
    pub fn is_forest(&self, n: usize) -> bool {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverInstance {
    pub universe: BTreeSet<Vertex>,
    pub sets: Vec<(Shortcut, BTreeSet<Vertex>)>,
}

/// Everything the pipeline needs about one graph: distances, the deficient
/// set and the tiebreaking order.
pub struct Kk1Context<'a> {
    g: &'a WeightedGraph,
    table: DistanceTable,
    p: Params,
    report: DeficiencyReport,
    phi: VertexOrdering,
}

impl<'a> Kk1Context<'a> {
    pub fn new(g: &'a WeightedGraph, p: Params, phi: Option<VertexOrdering>) -> Result<Self, Kk1Error> {
        if g.is_directed() {
            return Err(Kk1Error::RequiresUndirected);
        }
        if p.rho != p.k + 1 {
            return Err(Kk1Error::RequiresRhoKPlus1 { k: p.k, rho: p.rho });
        }
        let n = g.vertex_count();
        let phi = phi.unwrap_or_else(|| VertexOrdering::identity(n));
        if phi.len() != n {
            return Err(Kk1Error::InvalidOrdering(n));
        }
        let table = all_pairs_shortest_with_hops(g)?;
        let report = deficiency_from_table(&table, p);
        Ok(Self {
            g,
            table,
            p,
            report,
            phi,
        })
    }

    pub fn table(&self) -> &DistanceTable {
        &self.table
    }

    pub fn report(&self) -> &DeficiencyReport {
        &self.report
    }

    pub fn deficient(&self) -> &BTreeSet<Vertex> {
        &self.report.deficient
    }

    fn require_deficient(&self, v: Vertex) -> Result<(), Kk1Error> {
        if self.report.deficient.contains(&v) {
            Ok(())
        } else {
            Err(Kk1Error::NotDeficient(v))
        }
    }

    /// Tree over the `tree_rho`-closest neighbors of a deficient `v`;
    /// `tree_rho` is `k` or `k + 1` in the pipeline.
    pub fn spt(&self, v: Vertex, tree_rho: usize, mode: TreeMode) -> Result<ConstrainedSpt, Kk1Error> {
        self.require_deficient(v)?;
        constrained_spt(self.g, &self.table, tree_rho, v, mode, &self.phi)
    }

    /// Vertices of the (k+1)-union tree missing from the k-union tree.
    pub fn tiebreak_candidates(&self, v: Vertex) -> Result<TiebreakCandidates, Kk1Error> {
        let small = self.spt(v, self.p.k, TreeMode::Union)?.vertices();
        let large = self.spt(v, self.p.k + 1, TreeMode::Union)?.vertices();
        Ok(TiebreakCandidates {
            vertex: v,
            candidates: large.difference(&small).copied().collect(),
        })
    }

    /// Checks the per-vertex tree structure and returns the demand path.
    fn demand_path(&self, v: Vertex) -> Result<Vec<Vertex>, Kk1Error> {
        let k = self.p.k;
        let violation = |what: &str| Kk1Error::StructureViolation(format!("vertex {v}: {what}"));
        if !self.spt(v, k, TreeMode::Union)?.is_path() {
            return Err(violation("k-tree is not a path"));
        }
        let union = self.spt(v, k + 1, TreeMode::Union)?;
        if union.height() != k + 1 {
            return Err(violation("(k+1)-tree does not have height k+1"));
        }
        let tie = self.spt(v, k + 1, TreeMode::Tiebroken)?;
        let path = tie
            .as_path()
            .ok_or_else(|| violation("tiebroken (k+1)-tree is not a path"))?;
        if path.len() != k + 2 {
            return Err(violation("demand path does not have k+1 edges"));
        }
        Ok(path)
    }

    pub fn restricted_subgraph(&self) -> Result<RestrictedSubgraph, Kk1Error> {
        let mut edges = BTreeSet::new();
        let mut demand_paths = BTreeMap::new();
        for &v in &self.report.deficient {
            let path = self.demand_path(v)?;
            for w in path.windows(2) {
                edges.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
            demand_paths.insert(v, path);
        }
        let rsg = RestrictedSubgraph {
            edges,
            demand_paths,
        };
        if !rsg.is_forest(self.g.vertex_count()) {
            return Err(Kk1Error::StructureViolation(
                "restricted subgraph contains a cycle".into(),
            ));
        }
        Ok(rsg)
    }

    /// Candidate shortcuts are the two-hop spans along demand paths, each
    /// mapped to the deficient vertices it alone gives a ball.
    pub fn cover_instance(&self, rsg: &RestrictedSubgraph) -> Result<CoverInstance, Kk1Error> {
        let mut candidates = BTreeSet::new();
        for path in rsg.demand_paths.values() {
            for w in path.windows(3) {
                let sc = make_shortcut(self.g, &self.table, w[0], w[2]).map_err(|e| {
                    Kk1Error::StructureViolation(format!("demand-path span is not a shortcut: {e}"))
                })?;
                if self.table.hops(sc.u, sc.v) != Some(2) {
                    return Err(Kk1Error::StructureViolation(format!(
                        "span ({}, {}) is not two hops",
                        sc.u, sc.v
                    )));
                }
                candidates.insert(sc);
            }
        }
        let mut sets = Vec::with_capacity(candidates.len());
        for c in candidates {
            let covered = coverage_with_table(self.g, &self.table, self.p, &c, &self.report)?;
            sets.push((c, covered));
        }
        Ok(CoverInstance {
            universe: self.report.deficient.clone(),
            sets,
        })
    }

    pub fn solve(&self) -> Result<SolveResult, Kk1Error> {
        let rsg = self.restricted_subgraph()?;
        let inst = self.cover_instance(&rsg)?;
        let (picked, explored) = min_set_cover(&inst, DEFAULT_NODE_CAP)?;
        let shortcuts = picked.into_iter().map(|i| inst.sets[i].0).collect();
        let check = verify_with_table(self.g, &self.table, self.p, &shortcuts)?;
        if !check.valid {
            return Err(Kk1Error::StructureViolation(
                "restricted cover solution does not verify".into(),
            ));
        }
        Ok(SolveResult {
            shortcuts,
            optimal: true,
            explored,
        })
    }
}

/// Minimum number of sets covering the universe, by iterative deepening
/// that branches on the uncovered element with the fewest covering sets.
pub fn min_set_cover(inst: &CoverInstance, node_cap: u64) -> Result<(Vec<usize>, u64), Kk1Error> {
    let universe: Vec<Vertex> = inst.universe.iter().copied().collect();
    let index: BTreeMap<Vertex, usize> = universe.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let members: Vec<Vec<usize>> = inst
        .sets
        .iter()
        .map(|(_, s)| s.iter().filter_map(|x| index.get(x).copied()).collect())
        .collect();
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); universe.len()];
    for (s, elems) in members.iter().enumerate() {
        for &e in elems {
            covering[e].push(s);
        }
    }
    if let Some(e) = covering.iter().position(|c| c.is_empty()) {
        return Err(Kk1Error::StructureViolation(format!(
            "deficient vertex {} is covered by no restricted candidate",
            universe[e]
        )));
    }
    let largest = members.iter().map(Vec::len).max().unwrap_or(0);

    struct State<'s> {
        members: &'s [Vec<usize>],
        covering: &'s [Vec<usize>],
        largest: usize,
        count: Vec<usize>,
        uncovered: usize,
        picked: Vec<usize>,
        explored: u64,
        cap: u64,
    }

    impl State<'_> {
        fn toggle(&mut self, s: usize, add: bool) {
            for &e in &self.members[s] {
                if add {
                    if self.count[e] == 0 {
                        self.uncovered -= 1;
                    }
                    self.count[e] += 1;
                } else {
                    self.count[e] -= 1;
                    if self.count[e] == 0 {
                        self.uncovered += 1;
                    }
                }
            }
        }

        fn dfs(&mut self, budget: usize) -> Result<bool, Kk1Error> {
            self.explored += 1;
            if self.explored > self.cap {
                return Err(Kk1Error::SearchBudgetExceeded(self.cap));
            }
            if self.uncovered == 0 {
                return Ok(true);
            }
            if budget == 0 || self.uncovered > budget * self.largest {
                return Ok(false);
            }
            let e = (0..self.count.len())
                .filter(|&e| self.count[e] == 0)
                .min_by_key(|&e| self.covering[e].len())
                .unwrap();
            for i in 0..self.covering[e].len() {
                let s = self.covering[e][i];
                self.toggle(s, true);
                self.picked.push(s);
                if self.dfs(budget - 1)? {
                    return Ok(true);
                }
                self.picked.pop();
                self.toggle(s, false);
            }
            Ok(false)
        }
    }

    let mut state = State {
        members: &members,
        covering: &covering,
        largest,
        count: vec![0; universe.len()],
        uncovered: universe.len(),
        picked: Vec::new(),
        explored: 0,
        cap: node_cap,
    };
    for budget in 0..=members.len() {
        if state.dfs(budget)? {
            let mut picked = state.picked;
            picked.sort();
            return Ok((picked, state.explored));
        }
    }
    unreachable!("every element has a covering set, so all sets together cover")
}

pub fn tiebreak_candidates(g: &WeightedGraph, p: Params, v: Vertex) -> Result<TiebreakCandidates, Kk1Error> {
    Kk1Context::new(g, p, None)?.tiebreak_candidates(v)
}

pub fn restricted_subgraph(
    g: &WeightedGraph,
    p: Params,
    phi: Option<VertexOrdering>,
) -> Result<RestrictedSubgraph, Kk1Error> {
    Kk1Context::new(g, p, phi)?.restricted_subgraph()
}

pub fn build_cover_instance(
    g: &WeightedGraph,
    p: Params,
    phi: Option<VertexOrdering>,
) -> Result<CoverInstance, Kk1Error> {
    let ctx = Kk1Context::new(g, p, phi)?;
    let rsg = ctx.restricted_subgraph()?;
    ctx.cover_instance(&rsg)
}

/// (k, k+1)-shortcut set of an undirected graph, minimum among the
/// restricted candidates.
pub fn solve_kk1(g: &WeightedGraph, p: Params, phi: Option<VertexOrdering>) -> Result<SolveResult, Kk1Error> {
    Kk1Context::new(g, p, phi)?.solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, false, (1..n).map(|i| (i - 1, i, 1))).unwrap()
    }

    fn p(k: usize) -> Params {
        Params::new(k, k + 1).unwrap()
    }

    /// 0-1-2 plus 2-a and 2-b, with a = 3 and b = 4.
    fn fork() -> WeightedGraph {
        WeightedGraph::from_edges(5, false, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1)]).unwrap()
    }

    #[test]
    fn p5_trees() {
        let g = path(5);
        let ctx = Kk1Context::new(&g, p(2), None).unwrap();
        for mode in [TreeMode::Union, TreeMode::Tiebroken] {
            let t = ctx.spt(0, 3, mode).unwrap();
            assert_eq!(t.as_path().unwrap(), vec![0, 1, 2, 3]);
        }
        assert_eq!(
            ctx.tiebreak_candidates(0).unwrap().candidates,
            BTreeSet::from([3])
        );
        assert_eq!(ctx.spt(2, 3, TreeMode::Union), Err(Kk1Error::NotDeficient(2)));
    }

    #[test]
    fn fork_trees_and_candidates() {
        let g = fork();
        let ctx = Kk1Context::new(&g, p(2), None).unwrap();
        assert!(ctx.deficient().contains(&0));
        let union = ctx.spt(0, 3, TreeMode::Union).unwrap();
        assert_eq!(union.height(), 3);
        assert_eq!(union.levels[&3], 3);
        assert_eq!(union.levels[&4], 3);
        assert!(!union.is_path());
        assert_eq!(ctx.tiebreak_candidates(0).unwrap().candidates, BTreeSet::from([3, 4]));
        let tie = ctx.spt(0, 3, TreeMode::Tiebroken).unwrap();
        assert_eq!(tie.as_path().unwrap(), vec![0, 1, 2, 3]);
        // Reversing the order picks the other leaf.
        let ctx = Kk1Context::new(&g, p(2), Some(VertexOrdering::from_ranks(vec![4, 3, 2, 1, 0]).unwrap())).unwrap();
        assert_eq!(
            ctx.spt(0, 3, TreeMode::Tiebroken).unwrap().as_path().unwrap(),
            vec![0, 1, 2, 4]
        );
    }

    #[test]
    fn shared_k_path_suffix_gives_equal_candidates() {
        // 0 and 5 both have k-path ending in 1, 2; 3 and 4 tie beyond 2.
        let g = WeightedGraph::from_edges(
            6,
            false,
            [(0, 1, 5), (5, 1, 10), (1, 2, 1), (2, 3, 2), (2, 4, 2)],
        )
        .unwrap();
        let ctx = Kk1Context::new(&g, p(2), None).unwrap();
        assert_eq!(ctx.deficient(), &BTreeSet::from([0, 5]));
        assert_eq!(ctx.spt(0, 2, TreeMode::Union).unwrap().as_path().unwrap(), vec![0, 1, 2]);
        assert_eq!(ctx.spt(5, 2, TreeMode::Union).unwrap().as_path().unwrap(), vec![5, 1, 2]);
        for v in [0, 5] {
            assert_eq!(ctx.tiebreak_candidates(v).unwrap().candidates, BTreeSet::from([3, 4]));
        }
        let r = ctx.solve().unwrap();
        assert_eq!(r.shortcuts.as_slice(), &[Shortcut::new(1, 3, 3)]);
    }

    #[test]
    fn p5_restricted_subgraph_and_cover() {
        let g = path(5);
        let ctx = Kk1Context::new(&g, p(2), None).unwrap();
        let rsg = ctx.restricted_subgraph().unwrap();
        assert_eq!(rsg.edges, BTreeSet::from([(0, 1), (1, 2), (2, 3), (3, 4)]));
        assert_eq!(rsg.demand_paths[&0], vec![0, 1, 2, 3]);
        assert_eq!(rsg.demand_paths[&4], vec![4, 3, 2, 1]);
        let inst = ctx.cover_instance(&rsg).unwrap();
        let cands: Vec<Shortcut> = inst.sets.iter().map(|(c, _)| *c).collect();
        assert_eq!(
            cands,
            vec![Shortcut::new(0, 2, 2), Shortcut::new(1, 3, 2), Shortcut::new(2, 4, 2)]
        );
        assert_eq!(inst.sets[1].1, BTreeSet::from([0, 4]));
        let r = ctx.solve().unwrap();
        assert_eq!(r.shortcuts.as_slice(), &[Shortcut::new(1, 3, 2)]);
        assert!(r.optimal);
    }

    #[test]
    fn empty_when_already_krho() {
        let g = path(3);
        let ctx = Kk1Context::new(&g, p(2), None).unwrap();
        let rsg = ctx.restricted_subgraph().unwrap();
        assert!(rsg.edges.is_empty());
        assert!(ctx.cover_instance(&rsg).unwrap().sets.is_empty());
        assert!(ctx.solve().unwrap().shortcuts.is_empty());
    }

    #[test]
    fn rejects_wrong_setting() {
        let g = path(4);
        assert_eq!(
            Kk1Context::new(&g, Params::new(2, 4).unwrap(), None).err(),
            Some(Kk1Error::RequiresRhoKPlus1 { k: 2, rho: 4 })
        );
        let d = WeightedGraph::from_edges(2, true, [(0, 1, 1)]).unwrap();
        assert_eq!(Kk1Context::new(&d, p(2), None).err(), Some(Kk1Error::RequiresUndirected));
        assert!(VertexOrdering::from_ranks(vec![0, 0]).is_err());
    }

    #[test]
    fn random_ordering_is_a_permutation() {
        let phi = VertexOrdering::random(10, 3);
        let mut ranks: Vec<usize> = (0..10).map(|v| phi.rank(v)).collect();
        ranks.sort();
        assert_eq!(ranks, (0..10).collect::<Vec<_>>());
        assert_eq!(phi, VertexOrdering::random(10, 3));
    }
    #[test]
    fn restricted_candidates_miss_shortcut_used_in_both_directions() {
        // 4 needs one of {1, 2} and 5 needs one of {1, 3}. The cherry
        // {2, 3} through 0 serves 4 as 3-0-2 and 5 as 2-0-3, but it lies on
        // a demand path only when the order puts 2 and 3 before 1.
        let g = WeightedGraph::from_edges(6, false, [(0, 1, 3), (0, 2, 3), (0, 3, 3), (2, 5, 3), (3, 4, 1)]).unwrap();
        let p = p(2);
        let best = crate::oracle::exhaustive_min_shortcuts(&g, p, &crate::oracle::all_candidate_shortcuts(&g), 3).unwrap();
        assert_eq!(best, vec![Shortcut::new(2, 3, 6)]);
        let ctx = Kk1Context::new(&g, p, None).unwrap();
        assert_eq!(ctx.deficient(), &BTreeSet::from([4, 5]));
        assert_eq!(ctx.solve().unwrap().shortcuts.len(), 2);
        let favourable = VertexOrdering::from_ranks(vec![0, 5, 1, 2, 3, 4]).unwrap();
        assert_eq!(solve_kk1(&g, p, Some(favourable)).unwrap().shortcuts.len(), 1);
    }
}
