//! Brute-force reference implementations.
//!
//! Nothing here calls into the Dijkstra, certificate, or search code paths;
//! these routines exist to cross-check them on small instances.

use std::collections::BTreeSet;

use crate::graph::{Params, PathLen, Vertex, Weight, WeightedGraph};
use crate::shortcut::Shortcut;

pub type OracleTable = Vec<Vec<Option<PathLen>>>;

/// `(dist, minhops)` for every ordered pair by enumerating all simple paths.
/// Exponential; meant for graphs with at most a handful of vertices.
pub fn enumerate_simple_paths(g: &WeightedGraph) -> OracleTable {
    let n = g.vertex_count();
    let mut table = vec![vec![None; n]; n];
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        walk(g, s, 0, 0, &mut on_path, &mut table[s]);
    }
    table
}

fn walk(
    g: &WeightedGraph,
    at: Vertex,
    dist: Weight,
    hops: usize,
    on_path: &mut [bool],
    row: &mut [Option<PathLen>],
) {
    let here = PathLen { dist, hops };
    if row[at].is_none_or(|best| here < best) {
        row[at] = Some(here);
    }
    for &(next, w) in g.neighbors(at) {
        if !on_path[next] {
            on_path[next] = true;
            walk(g, next, dist + w, hops + 1, on_path, row);
            on_path[next] = false;
        }
    }
}

/// `(dist, minhops)` from a hop-layered Bellman-Ford: `layer[h][v]` is the
/// lightest walk with at most `h` edges, and the hop count is the first
/// layer attaining the final distance.
pub fn layered_table(g: &WeightedGraph) -> OracleTable {
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex, Weight)> = g
        .edges()
        .flat_map(|(u, v, w)| {
            let back = (!g.is_directed()).then_some((v, u, w));
            std::iter::once((u, v, w)).chain(back)
        })
        .collect();
    (0..n)
        .map(|s| {
            let mut layers: Vec<Vec<Option<Weight>>> = vec![vec![None; n]];
            layers[0][s] = Some(0);
            for _ in 1..n.max(1) {
                let prev = layers.last().unwrap();
                let mut next = prev.clone();
                for &(u, v, w) in &edges {
                    if let Some(du) = prev[u] {
                        let cand = du + w;
                        if next[v].is_none_or(|dv| cand < dv) {
                            next[v] = Some(cand);
                        }
                    }
                }
                layers.push(next);
            }
            let last = layers.last().unwrap().clone();
            (0..n)
                .map(|v| {
                    last[v].map(|d| PathLen {
                        dist: d,
                        hops: layers.iter().position(|l| l[v] == Some(d)).unwrap(),
                    })
                })
                .collect()
        })
        .collect()
}

/// Direct reading of the ball definition: try every candidate set of the
/// right size and check the closeness condition, then the hop condition.
pub fn has_ball_by_subsets(row: &[Option<PathLen>], p: Params, u: Vertex) -> bool {
    let reach: Vec<(Vertex, PathLen)> = row
        .iter()
        .enumerate()
        .filter(|&(v, e)| v != u && e.is_some())
        .map(|(v, e)| (v, e.unwrap()))
        .collect();
    let size = reach.len().min(p.rho);
    let r = reach.len();
    for mask in 0u64..(1u64 << r) {
        if mask.count_ones() as usize != size {
            continue;
        }
        let inside = |i: usize| mask >> i & 1 == 1;
        let closest = (0..r).filter(|&i| inside(i)).all(|i| {
            (0..r)
                .filter(|&j| !inside(j))
                .all(|j| reach[i].1.dist <= reach[j].1.dist)
        });
        if closest && (0..r).filter(|&i| inside(i)).all(|i| reach[i].1.hops <= p.k) {
            return true;
        }
    }
    false
}

pub fn deficient_by_definition(g: &WeightedGraph, p: Params) -> BTreeSet<Vertex> {
    let table = layered_table(g);
    (0..g.vertex_count())
        .filter(|&u| !has_ball_by_subsets(&table[u], p, u))
        .collect()
}

/// Every pair at finite distance and hop distance above one, with its
/// weight, in lexicographic order.
pub fn all_candidate_shortcuts(g: &WeightedGraph) -> Vec<Shortcut> {
    let table = layered_table(g);
    let n = g.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!g.is_directed() && v < u) {
                continue;
            }
            if let Some(pl) = table[u][v] {
                if pl.hops > 1 {
                    out.push(Shortcut::new(u, v, pl.dist));
                }
            }
        }
    }
    out
}

fn with_shortcuts(g: &WeightedGraph, chosen: &[Shortcut]) -> WeightedGraph {
    let mut h = g.clone();
    for s in chosen {
        h.remove_edge(s.u, s.v);
        h.add_edge(s.u, s.v, s.weight).unwrap();
    }
    h
}

/// Smallest subset of `candidates` making `g` a (k, rho)-graph, found by
/// trying every subset in order of size. Returns `None` when even the full
/// candidate list does not suffice or `max_size` is reached.
pub fn exhaustive_min_shortcuts(
    g: &WeightedGraph,
    p: Params,
    candidates: &[Shortcut],
    max_size: usize,
) -> Option<Vec<Shortcut>> {
    let m = candidates.len();
    for size in 0..=max_size.min(m) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let chosen: Vec<Shortcut> = idx.iter().map(|&i| candidates[i]).collect();
            if deficient_by_definition(&with_shortcuts(g, &chosen), p).is_empty() {
                return Some(chosen);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next `idx.len()`-combination of `0..m`.
pub fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum hitting set size by scanning vertex subsets in order of size.
pub fn brute_force_hitting_set(n: usize, edges: &[Vec<Vertex>]) -> Vec<Vertex> {
    assert!(n < 64, "brute-force hitting set is limited to 63 vertices");
    let masks: Vec<u64> = edges
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    for size in 0..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let pick = idx.iter().fold(0u64, |m, &v| m | 1 << v);
            if masks.iter().all(|&e| e & pick != 0) {
                return idx;
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    unreachable!("the full vertex set hits every nonempty hyperedge")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_on_triangle() {
        let g = WeightedGraph::from_edges(3, false, [(0, 1, 1), (1, 2, 1), (0, 2, 2)]).unwrap();
        let a = enumerate_simple_paths(&g);
        let b = layered_table(&g);
        assert_eq!(a, b);
        assert_eq!(a[0][2], Some(PathLen { dist: 2, hops: 1 }));
    }

    #[test]
    fn definitional_balls_on_paths() {
        let g = WeightedGraph::from_edges(5, true, (1..5).map(|i| (i - 1, i, 1))).unwrap();
        let p = Params::new(2, 3).unwrap();
        assert_eq!(deficient_by_definition(&g, p), BTreeSet::from([0, 1]));
        let g = WeightedGraph::from_edges(5, false, (1..5).map(|i| (i - 1, i, 1))).unwrap();
        assert_eq!(deficient_by_definition(&g, p), BTreeSet::from([0, 4]));
    }

    #[test]
    fn exhaustive_shortcut_optimum_on_p5() {
        let p = Params::new(2, 3).unwrap();
        let g = WeightedGraph::from_edges(5, true, (1..5).map(|i| (i - 1, i, 1))).unwrap();
        let best = exhaustive_min_shortcuts(&g, p, &all_candidate_shortcuts(&g), 4).unwrap();
        // (1, 3) serves both 0 and 1.
        assert_eq!(best, vec![Shortcut::new(1, 3, 2)]);
        let g = WeightedGraph::from_edges(5, false, (1..5).map(|i| (i - 1, i, 1))).unwrap();
        let best = exhaustive_min_shortcuts(&g, p, &all_candidate_shortcuts(&g), 4).unwrap();
        assert_eq!(best, vec![Shortcut::new(1, 3, 2)]);
    }

    #[test]
    fn hitting_set_triangle() {
        let edges = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(brute_force_hitting_set(3, &edges).len(), 2);
        assert!(brute_force_hitting_set(3, &[]).is_empty());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
