//! Hard-instance generation from Hitting Set.
//!
//! Two constructions are provided. [`reduce_thm1`] maps a rank-`d`
//! hypergraph to a graph whose deficient vertices are exactly the path
//! starts `s_e`, each of which needs a shortcut to reach the sink `T2`;
//! hitting sets and shortcut sets then correspond one to one.
//! [`reduce_tiebreaker`] instead hides the hitting set in the choice of
//! rho-closest neighbor sets: each `s_e` sees `d` equally distant chain ends
//! `v3` and must pick one of them.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    all_pairs_shortest_with_hops, certificate_from_row, GraphError, Params, Vertex, Weight,
    WeightedGraph,
};
use crate::shortcut::{apply_shortcuts, verify_shortcut_set, Shortcut, ShortcutError, ShortcutSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("hyperedge {edge} has size {size}, above the rank bound {d}")]
    RankTooLarge { edge: usize, size: usize, d: usize },
    #[error("parameter violation: {0}")]
    ParameterViolation(String),
    #[error("hyperedge {0} is not hit")]
    NotAHittingSet(usize),
    #[error("shortcut set does not turn the instance into a (k, rho)-graph")]
    InvalidSolution,
    #[error("projected vertices miss hyperedge {0}")]
    ProjectionFailed(usize),
    #[error("assignment for vertex {0} is not a legal rho-closest neighbor set")]
    IllegalAssignment(Vertex),
    #[error("hitting-set search exceeded the cap of {0} nodes")]
    SearchBudgetExceeded(u64),
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Shortcut(#[from] ShortcutError),
}

/// Hypergraph on `0..vertex_count`; each hyperedge is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    vertex_count: usize,
    hyperedges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, hyperedges: Vec<Vec<Vertex>>) -> Result<Self, HardnessError> {
        let mut clean = Vec::with_capacity(hyperedges.len());
        for (i, e) in hyperedges.into_iter().enumerate() {
            let set: BTreeSet<Vertex> = e.iter().copied().collect();
            if set.is_empty() {
                return Err(HardnessError::InvalidHypergraph(format!("hyperedge {i} is empty")));
            }
            if set.len() != e.len() {
                return Err(HardnessError::InvalidHypergraph(format!(
                    "hyperedge {i} repeats a vertex"
                )));
            }
            if let Some(&v) = set.iter().find(|&&v| v >= vertex_count) {
                return Err(HardnessError::InvalidHypergraph(format!(
                    "hyperedge {i} uses vertex {v} outside 0..{vertex_count}"
                )));
            }
            clean.push(set.into_iter().collect());
        }
        Ok(Self {
            vertex_count,
            hyperedges: clean,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn hyperedges(&self) -> &[Vec<Vertex>] {
        &self.hyperedges
    }

    pub fn rank(&self) -> usize {
        self.hyperedges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the first hyperedge `u` misses, if any.
    pub fn first_unhit(&self, u: &BTreeSet<Vertex>) -> Option<usize> {
        self.hyperedges
            .iter()
            .position(|e| !e.iter().any(|v| u.contains(v)))
    }

    pub fn is_hitting_set(&self, u: &BTreeSet<Vertex>) -> bool {
        self.first_unhit(u).is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HittingSet {
    pub vertices: BTreeSet<Vertex>,
}

impl HittingSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

impl FromIterator<Vertex> for HittingSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Self {
            vertices: iter.into_iter().collect(),
        }
    }
}

/// Pads every hyperedge to size exactly `d` with fresh vertices, then adds
/// isolated vertices until there are at least `d + 1` (only when there is a
/// hyperedge at all).
pub fn pad_hypergraph(h: &Hypergraph, d: usize) -> Result<Hypergraph, HardnessError> {
    let mut n = h.vertex_count;
    let mut edges = Vec::with_capacity(h.hyperedges.len());
    for (i, e) in h.hyperedges.iter().enumerate() {
        if e.len() > d {
            return Err(HardnessError::RankTooLarge {
                edge: i,
                size: e.len(),
                d,
            });
        }
        let mut padded = e.clone();
        padded.extend(n..n + d - e.len());
        n += d - e.len();
        edges.push(padded);
    }
    if !edges.is_empty() && n < d + 1 {
        n = d + 1;
    }
    Ok(Hypergraph {
        vertex_count: n,
        hyperedges: edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    HittingSet,
    Tiebreaker,
}

/// Which graph vertex plays which role in a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleMap {
    pub construction: Construction,
    pub k: usize,
    pub rho: usize,
    pub d: usize,
    pub directed: bool,
    pub original_vertex_count: usize,
    pub padded: Hypergraph,
    /// Per hyperedge, the path `s_e, ..., t_e` (one vertex when `k = 2`).
    pub paths: Vec<Vec<Vertex>>,
    /// Per hypergraph vertex: `[v]` for the hitting-set construction,
    /// `[v1, v2, v3]` for the tiebreaker construction.
    pub elements: Vec<Vec<Vertex>>,
    pub t1: Option<Vertex>,
    pub t2: Option<Vertex>,
    pub w: Option<Vertex>,
}

impl RoleMap {
    pub fn starts(&self) -> BTreeSet<Vertex> {
        self.paths.iter().map(|p| p[0]).collect()
    }

    pub fn params(&self) -> Params {
        Params {
            k: self.k,
            rho: self.rho,
        }
    }

    /// Hyperedge whose path contains `x`.
    pub fn path_of(&self, x: Vertex) -> Option<usize> {
        self.paths.iter().position(|p| p.contains(&x))
    }

    /// Hypergraph vertex whose gadget contains `x`.
    pub fn element_of(&self, x: Vertex) -> Option<Vertex> {
        self.elements.iter().position(|g| g.contains(&x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionLayout {
    pub graph: WeightedGraph,
    pub roles: RoleMap,
}

fn check_params(k: usize, rho: usize, extra: usize) -> Result<(), HardnessError> {
    if k < 2 {
        return Err(HardnessError::ParameterViolation(format!("k must be at least 2 (got {k})")));
    }
    if rho < k + extra {
        return Err(HardnessError::ParameterViolation(format!(
            "rho must be at least k + {extra} (got k={k}, rho={rho})"
        )));
    }
    Ok(())
}

fn add_paths(g: &mut WeightedGraph, first: Vertex, count: usize, len: usize) -> Result<Vec<Vec<Vertex>>, GraphError> {
    let mut paths = Vec::with_capacity(count);
    for e in 0..count {
        let path: Vec<Vertex> = (first + e * len..first + (e + 1) * len).collect();
        for w in path.windows(2) {
            g.add_edge(w[0], w[1], 1)?;
        }
        paths.push(path);
    }
    Ok(paths)
}

/// Hitting Set with rank `rho - k` to (k, rho)-Shortcut.
///
/// Vertex ids: padded hypergraph vertices first (so they keep their ids),
/// then the paths by hyperedge index, then `T1`, `T2`.
pub fn reduce_thm1(h: &Hypergraph, k: usize, rho: usize, directed: bool) -> Result<ReductionLayout, HardnessError> {
    check_params(k, rho, 2)?;
    let d = rho - k;
    let padded = pad_hypergraph(h, d)?;
    let n_h = padded.vertex_count;
    let m = padded.hyperedges.len();
    let path_len = k - 1;
    let t1 = n_h + m * path_len;
    let t2 = t1 + 1;
    let mut g = WeightedGraph::new(t2 + 1, directed);
    let paths = add_paths(&mut g, n_h, m, path_len)?;
    for (e, path) in padded.hyperedges.iter().zip(&paths) {
        for &v in e {
            g.add_edge(*path.last().unwrap(), v, 3)?;
        }
    }
    for v in 0..n_h {
        g.add_edge(v, t1, 1)?;
    }
    g.add_edge(t1, t2, 1)?;
    Ok(ReductionLayout {
        graph: g,
        roles: RoleMap {
            construction: Construction::HittingSet,
            k,
            rho,
            d,
            directed,
            original_vertex_count: h.vertex_count,
            elements: (0..n_h).map(|v| vec![v]).collect(),
            padded,
            paths,
            t1: Some(t1),
            t2: Some(t2),
            w: None,
        },
    })
}

/// Hitting Set with rank `floor((rho - k + 1) / 2)` to instances whose
/// rho-closest neighbor choices encode a hitting set.
///
/// Vertex ids: the paths by hyperedge index, then the chains `v1, v2, v3`
/// per padded hypergraph vertex, then `w` when `rho - k + 1` is odd.
pub fn reduce_tiebreaker(
    h: &Hypergraph,
    k: usize,
    rho: usize,
    directed: bool,
) -> Result<ReductionLayout, HardnessError> {
    check_params(k, rho, 3)?;
    let d = (rho - k + 1) / 2;
    let padded = pad_hypergraph(h, d)?;
    let n_h = padded.vertex_count;
    let m = padded.hyperedges.len();
    let path_len = k - 1;
    let chain_base = m * path_len;
    let odd = (rho - k + 1) % 2 == 1;
    let total = chain_base + 3 * n_h + usize::from(odd);
    let mut g = WeightedGraph::new(total, directed);
    let paths = add_paths(&mut g, 0, m, path_len)?;
    let elements: Vec<Vec<Vertex>> = (0..n_h)
        .map(|v| (chain_base + 3 * v..chain_base + 3 * v + 3).collect())
        .collect();
    for chain in &elements {
        g.add_edge(chain[0], chain[1], 1)?;
        g.add_edge(chain[1], chain[2], 1)?;
    }
    let w = odd.then_some(total - 1);
    for (e, path) in padded.hyperedges.iter().zip(&paths) {
        let t = *path.last().unwrap();
        for &v in e {
            g.add_edge(t, elements[v][0], 3)?;
        }
        if let Some(w) = w {
            g.add_edge(t, w, 3)?;
        }
    }
    Ok(ReductionLayout {
        graph: g,
        roles: RoleMap {
            construction: Construction::Tiebreaker,
            k,
            rho,
            d,
            directed,
            original_vertex_count: h.vertex_count,
            padded,
            paths,
            elements,
            t1: None,
            t2: None,
            w,
        },
    })
}

fn require(layout: &ReductionLayout, c: Construction) -> Result<(), HardnessError> {
    if layout.roles.construction == c {
        Ok(())
    } else {
        Err(HardnessError::ParameterViolation(format!(
            "operation needs a {c:?} layout"
        )))
    }
}

/// `{(v, T2) : v in U}`, each with weight 2.
pub fn lift_hitting_to_shortcuts(layout: &ReductionLayout, u: &HittingSet) -> Result<ShortcutSet, HardnessError> {
    require(layout, Construction::HittingSet)?;
    let r = &layout.roles;
    if let Some(e) = r.padded.first_unhit(&u.vertices) {
        return Err(HardnessError::NotAHittingSet(e));
    }
    let t2 = r.t2.unwrap();
    Ok(u.vertices.iter().map(|&v| Shortcut::new(v, t2, 2)).collect())
}

/// Maps a valid shortcut set back to a hitting set of at most its size.
///
/// Shortcuts touching a hypergraph vertex `v` are read as `(v, T2)`;
/// shortcuts inside the path of hyperedge `e` are replaced by the smallest
/// element of `e`.
pub fn project_shortcuts_to_hitting(layout: &ReductionLayout, s: &ShortcutSet) -> Result<HittingSet, HardnessError> {
    require(layout, Construction::HittingSet)?;
    let r = &layout.roles;
    if !verify_shortcut_set(&layout.graph, r.params(), s)?.valid {
        return Err(HardnessError::InvalidSolution);
    }
    let mut u = BTreeSet::new();
    for sc in s {
        let ends = [sc.u, sc.v];
        let pick = ends
            .iter()
            .find_map(|&x| r.path_of(x))
            .map(|e| r.padded.hyperedges[e][0])
            .or_else(|| ends.iter().find_map(|&x| r.element_of(x)));
        if let Some(v) = pick {
            u.insert(v);
        }
    }
    if let Some(e) = r.padded.first_unhit(&u) {
        return Err(HardnessError::ProjectionFailed(e));
    }
    Ok(HittingSet { vertices: u })
}

/// Whether `set` is a legal rho-closest neighbor set of `v` in `g`.
pub fn is_rho_closest_set(g: &WeightedGraph, rho: usize, v: Vertex, set: &BTreeSet<Vertex>) -> Result<bool, GraphError> {
    let table = all_pairs_shortest_with_hops(g)?;
    let reach: BTreeMap<Vertex, Weight> = table.reachable(v).map(|(u, pl)| (u, pl.dist)).collect();
    if set.len() != reach.len().min(rho) || set.iter().any(|u| !reach.contains_key(u)) {
        return Ok(false);
    }
    let inner_max = set.iter().map(|u| reach[u]).max().unwrap_or(0);
    Ok(reach
        .iter()
        .filter(|(u, _)| !set.contains(u))
        .all(|(_, &d)| d >= inner_max))
}

/// Hypergraph vertices whose chain end `v3` appears in some assignment.
pub fn extract_hitting_from_tiebreak(
    layout: &ReductionLayout,
    assignments: &BTreeMap<Vertex, BTreeSet<Vertex>>,
) -> Result<HittingSet, HardnessError> {
    require(layout, Construction::Tiebreaker)?;
    let r = &layout.roles;
    for (&s, set) in assignments {
        if !r.starts().contains(&s) || !is_rho_closest_set(&layout.graph, r.rho, s, set)? {
            return Err(HardnessError::IllegalAssignment(s));
        }
    }
    Ok(r.elements
        .iter()
        .enumerate()
        .filter(|(_, chain)| assignments.values().any(|set| set.contains(&chain[2])))
        .map(|(v, _)| v)
        .collect())
}

/// For every path start, the rho-closest neighbor set realised after adding
/// `s`: everything inside the radius plus the smallest-id boundary vertices
/// reachable within k hops.
pub fn assignments_from_shortcuts(
    layout: &ReductionLayout,
    s: &ShortcutSet,
) -> Result<BTreeMap<Vertex, BTreeSet<Vertex>>, HardnessError> {
    let p = layout.roles.params();
    let augmented = apply_shortcuts(&layout.graph, s)?;
    let table = all_pairs_shortest_with_hops(&augmented)?;
    let mut out = BTreeMap::new();
    for start in layout.roles.starts() {
        let cert = certificate_from_row(table.row(start), p, start);
        if !cert.has_ball {
            return Err(HardnessError::InvalidSolution);
        }
        let mut set = BTreeSet::new();
        let mut boundary = 0;
        for (u, pl) in table.reachable(start) {
            if pl.dist < cert.radius {
                set.insert(u);
            } else if pl.dist == cert.radius && pl.hops <= p.k && boundary < cert.boundary_needed {
                set.insert(u);
                boundary += 1;
            }
        }
        out.insert(start, set);
    }
    Ok(out)
}

/// Minimum hitting set; with `alpha`, the search stops at that size and
/// returns `None` when nothing that small exists.
pub fn solve_hitting_exact(
    h: &Hypergraph,
    alpha: Option<usize>,
    node_cap: u64,
) -> Result<Option<HittingSet>, HardnessError> {
    struct Search<'h> {
        h: &'h Hypergraph,
        chosen: BTreeSet<Vertex>,
        explored: u64,
        cap: u64,
    }

    impl Search<'_> {
        fn dfs(&mut self, budget: usize) -> Result<bool, HardnessError> {
            self.explored += 1;
            if self.explored > self.cap {
                return Err(HardnessError::SearchBudgetExceeded(self.cap));
            }
            let Some(e) = self.h.first_unhit(&self.chosen) else {
                return Ok(true);
            };
            if budget == 0 {
                return Ok(false);
            }
            for &v in &self.h.hyperedges[e] {
                self.chosen.insert(v);
                if self.dfs(budget - 1)? {
                    return Ok(true);
                }
                self.chosen.remove(&v);
            }
            Ok(false)
        }
    }

    let limit = alpha.unwrap_or(h.hyperedges.len());
    let mut search = Search {
        h,
        chosen: BTreeSet::new(),
        explored: 0,
        cap: node_cap,
    };
    for budget in 0..=limit {
        if search.dfs(budget)? {
            return Ok(Some(HittingSet {
                vertices: search.chosen,
            }));
        }
    }
    Ok(None)
}

/// `m` hyperedges over `0..n`, each a uniform subset of uniform size in `1..=d`.
pub fn random_hypergraph(n: usize, m: usize, d: usize, seed: u64) -> Hypergraph {
    assert!(d <= n, "rank {d} exceeds vertex count {n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hyperedges = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=d);
            let mut e = sample(&mut rng, n, size).into_vec();
            e.sort_unstable();
            e
        })
        .collect();
    Hypergraph {
        vertex_count: n,
        hyperedges,
    }
}

/// Erdős–Rényi style graph: every ordered (directed) or unordered pair is an
/// edge with probability `p`, weights uniform in `1..=max_weight`.
pub fn random_graph(n: usize, p: f64, max_weight: Weight, directed: bool, seed: u64) -> WeightedGraph {
    assert!(max_weight >= 1, "weights must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(n, directed);
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.gen_bool(p) {
                let w = rng.gen_range(1..=max_weight);
                g.add_edge(u, v, w).expect("fresh pair");
            }
        }
    }
    g
}
