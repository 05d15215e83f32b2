//! Weighted graphs and exact (distance, hop count) computations.
//!
//! Weights are positive integers so that ties between equally distant
//! vertices are detected exactly. Unreachable pairs are represented by
//! `None` rather than a large sentinel weight.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub type Vertex = usize;
pub type Weight = u64;

/// Sources at or above this many vertices are processed in parallel.
const PARALLEL_THRESHOLD: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge ({u}, {v}) has weight 0; weights must be at least 1")]
    ZeroWeight { u: Vertex, v: Vertex },
    #[error("vertex {v} out of range for a graph with {n} vertices")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: Vertex, v: Vertex },
    #[error("distance overflow while relaxing edges out of vertex {0}")]
    Overflow(Vertex),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// A simple directed or undirected graph with positive integer weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    directed: bool,
    adj: Vec<Vec<(Vertex, Weight)>>,
    edges: BTreeMap<(Vertex, Vertex), Weight>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.adj.len() == other.adj.len()
            && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new(n: usize, directed: bool) -> Self {
        Self {
            directed,
            adj: vec![Vec::new(); n],
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges<I>(n: usize, directed: bool, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Weight)>,
    {
        let mut g = Self::new(n, directed);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Key under which the pair `(u, v)` is stored: ordered for directed
    /// graphs, `(min, max)` for undirected ones.
    pub fn pair_key(&self, u: Vertex, v: Vertex) -> (Vertex, Vertex) {
        if self.directed || u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                v,
                n: self.adj.len(),
            })
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if w == 0 {
            return Err(GraphError::ZeroWeight { u, v });
        }
        let key = self.pair_key(u, v);
        if self.edges.contains_key(&key) {
            return Err(GraphError::DuplicateEdge { u: key.0, v: key.1 });
        }
        self.edges.insert(key, w);
        self.adj[u].push((v, w));
        if !self.directed {
            self.adj[v].push((u, w));
        }
        Ok(())
    }

    /// Removes the edge between `u` and `v`, returning its weight.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Option<Weight> {
        let key = self.pair_key(u, v);
        let w = self.edges.remove(&key)?;
        self.adj[u].retain(|&(x, _)| x != v);
        if !self.directed {
            self.adj[v].retain(|&(x, _)| x != u);
        }
        Some(w)
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        if u >= self.adj.len() || v >= self.adj.len() {
            return None;
        }
        self.edges.get(&self.pair_key(u, v)).copied()
    }

    /// Outgoing neighbors (all neighbors for undirected graphs).
    pub fn neighbors(&self, u: Vertex) -> &[(Vertex, Weight)] {
        &self.adj[u]
    }

    /// Edges in canonical order as `(u, v, w)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }
}

/// Weight distance together with the fewest hops among shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PathLen {
    pub dist: Weight,
    pub hops: usize,
}

/// Exact all-pairs `(dist, minhops)`; `None` marks an unreachable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    entries: Vec<Option<PathLen>>,
}

impl DistanceTable {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<PathLen> {
        self.entries[u * self.n + v]
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        self.get(u, v).map(|p| p.dist)
    }

    pub fn hops(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.get(u, v).map(|p| p.hops)
    }

    pub fn row(&self, u: Vertex) -> &[Option<PathLen>] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    /// `R_u`: every vertex other than `u` reachable from `u`.
    pub fn reachable(&self, u: Vertex) -> impl Iterator<Item = (Vertex, PathLen)> + '_ {
        self.row(u)
            .iter()
            .enumerate()
            .filter_map(move |(v, e)| if v == u { None } else { e.map(|p| (v, p)) })
    }
}

/// Dijkstra from `source` with priority on `(dist, hops)` lexicographically.
pub fn single_source_with_hops(
    g: &WeightedGraph,
    source: Vertex,
) -> Result<Vec<Option<PathLen>>, GraphError> {
    g.check_vertex(source)?;
    let n = g.vertex_count();
    let mut best: Vec<Option<PathLen>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[source] = Some(PathLen { dist: 0, hops: 0 });
    heap.push(Reverse((0 as Weight, 0usize, source)));
    while let Some(Reverse((dist, hops, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            if done[v] {
                continue;
            }
            let nd = dist.checked_add(w).ok_or(GraphError::Overflow(u))?;
            let cand = PathLen {
                dist: nd,
                hops: hops + 1,
            };
            if best[v].is_none_or(|cur| cand < cur) {
                best[v] = Some(cand);
                heap.push(Reverse((cand.dist, cand.hops, v)));
            }
        }
    }
    Ok(best)
}

pub fn all_pairs_shortest_with_hops(g: &WeightedGraph) -> Result<DistanceTable, GraphError> {
    let n = g.vertex_count();
    let rows: Vec<Vec<Option<PathLen>>> = if n >= PARALLEL_THRESHOLD {
        (0..n)
            .into_par_iter()
            .map(|s| single_source_with_hops(g, s))
            .collect::<Result<_, _>>()?
    } else {
        (0..n)
            .map(|s| single_source_with_hops(g, s))
            .collect::<Result<_, _>>()?
    };
    Ok(DistanceTable {
        n,
        entries: rows.into_iter().flatten().collect(),
    })
}

/// Hop budget `k` and neighborhood size `rho`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    pub k: usize,
    pub rho: usize,
}

impl Params {
    pub fn new(k: usize, rho: usize) -> Result<Self, GraphError> {
        if k == 0 || rho == 0 {
            return Err(GraphError::InvalidParams(format!(
                "k and rho must be at least 1 (got k={k}, rho={rho})"
            )));
        }
        Ok(Self { k, rho })
    }
}

/// Evidence that a vertex does or does not have a (k, rho)-ball.
///
/// `radius` is the smallest distance `d` such that at least
/// `min(|R_u|, rho)` other vertices lie within distance `d`. Every vertex
/// strictly inside the radius must be within `k` hops, and at least
/// `boundary_needed` of the vertices exactly at the radius must be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BallCertificate {
    pub vertex: Vertex,
    pub reachable_count: usize,
    pub radius: Weight,
    pub inner_ok: bool,
    pub boundary_within_k: usize,
    pub boundary_needed: usize,
    pub has_ball: bool,
}

/// Panics if `u` is not a vertex of the table.
pub fn ball_certificate(table: &DistanceTable, p: Params, u: Vertex) -> BallCertificate {
    assert!(u < table.vertex_count(), "vertex {u} out of range");
    certificate_from_row(table.row(u), p, u)
}

/// Same as [`ball_certificate`] given only the single-source row of `u`.
pub fn certificate_from_row(row: &[Option<PathLen>], p: Params, u: Vertex) -> BallCertificate {
    let reachable = || {
        row.iter()
            .enumerate()
            .filter_map(move |(v, e)| if v == u { None } else { e.map(|pl| (v, pl)) })
    };
    let mut dists: Vec<Weight> = reachable().map(|(_, pl)| pl.dist).collect();
    let reachable_count = dists.len();
    let target = reachable_count.min(p.rho);
    if target == 0 {
        return BallCertificate {
            vertex: u,
            reachable_count,
            radius: 0,
            inner_ok: true,
            boundary_within_k: 0,
            boundary_needed: 0,
            has_ball: true,
        };
    }
    dists.sort_unstable();
    let radius = dists[target - 1];
    let mut inner = 0;
    let mut inner_ok = true;
    let mut boundary_within_k = 0;
    for (_, pl) in reachable() {
        if pl.dist < radius {
            inner += 1;
            inner_ok &= pl.hops <= p.k;
        } else if pl.dist == radius && pl.hops <= p.k {
            boundary_within_k += 1;
        }
    }
    let boundary_needed = target - inner;
    BallCertificate {
        vertex: u,
        reachable_count,
        radius,
        inner_ok,
        boundary_within_k,
        boundary_needed,
        has_ball: inner_ok && boundary_within_k >= boundary_needed,
    }
}

/// The set of vertices lacking a (k, rho)-ball, with per-vertex evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyReport {
    pub deficient: BTreeSet<Vertex>,
    pub certificates: Vec<BallCertificate>,
}

impl DeficiencyReport {
    pub fn is_krho_graph(&self) -> bool {
        self.deficient.is_empty()
    }
}

pub fn deficiency_from_table(table: &DistanceTable, p: Params) -> DeficiencyReport {
    let certificates: Vec<BallCertificate> = (0..table.vertex_count())
        .map(|u| ball_certificate(table, p, u))
        .collect();
    let deficient = certificates
        .iter()
        .filter(|c| !c.has_ball)
        .map(|c| c.vertex)
        .collect();
    DeficiencyReport {
        deficient,
        certificates,
    }
}

pub fn deficient_vertices(g: &WeightedGraph, p: Params) -> Result<DeficiencyReport, GraphError> {
    let table = all_pairs_shortest_with_hops(g)?;
    Ok(deficiency_from_table(&table, p))
}

/// Every vertex that belongs to at least one rho-closest neighbor set of `u`.
pub fn rho_closest_union(table: &DistanceTable, rho: usize, u: Vertex) -> BTreeSet<Vertex> {
    let mut reach: Vec<(Vertex, Weight)> = table.reachable(u).map(|(v, pl)| (v, pl.dist)).collect();
    if reach.len() <= rho {
        return reach.into_iter().map(|(v, _)| v).collect();
    }
    if rho == 0 {
        return BTreeSet::new();
    }
    reach.sort_unstable_by_key(|&(v, d)| (d, v));
    let threshold = reach[rho - 1].1;
    reach
        .into_iter()
        .take_while(|&(_, d)| d <= threshold)
        .map(|(v, _)| v)
        .collect()
}
