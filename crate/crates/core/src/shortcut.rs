//! Shortcut edges: construction, application, verification and the hop-2
//! normalization available when `rho = k + 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{
    all_pairs_shortest_with_hops, deficiency_from_table, DeficiencyReport, DistanceTable,
    GraphError, Params, Vertex, Weight, WeightedGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotShortcutReason {
    SameVertex,
    OutOfRange,
    Unreachable,
    AlreadyAdjacent,
    WeightMismatch { expected: Weight },
}

impl fmt::Display for NotShortcutReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SameVertex => write!(f, "endpoints coincide"),
            Self::OutOfRange => write!(f, "endpoint out of range"),
            Self::Unreachable => write!(f, "target unreachable"),
            Self::AlreadyAdjacent => write!(f, "hop distance is at most 1"),
            Self::WeightMismatch { expected } => {
                write!(f, "weight differs from the weight distance {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortcutError {
    #[error("({u}, {v}) is not a shortcut: {reason}")]
    NotAShortcut {
        u: Vertex,
        v: Vertex,
        reason: NotShortcutReason,
    },
    #[error("shortcut pair ({u}, {v}) appears more than once")]
    DuplicatePair { u: Vertex, v: Vertex },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hop-2 normalization produced a set that no longer verifies")]
    NormalizationFailed,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An edge whose weight equals the weight distance between its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Shortcut {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: Weight,
}

impl Shortcut {
    pub fn new(u: Vertex, v: Vertex, weight: Weight) -> Self {
        Self { u, v, weight }
    }
}

/// A set of shortcuts with an optional cardinality budget.
///
/// Entries are kept sorted and unique by ordered endpoint pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ShortcutSet {
    shortcuts: Vec<Shortcut>,
    pub budget: Option<usize>,
}

impl ShortcutSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(budget: usize) -> Self {
        Self {
            shortcuts: Vec::new(),
            budget: Some(budget),
        }
    }

    /// Inserts `s`, returning `false` if its ordered pair is already present.
    pub fn insert(&mut self, s: Shortcut) -> bool {
        match self
            .shortcuts
            .binary_search_by_key(&(s.u, s.v), |x| (x.u, x.v))
        {
            Ok(_) => false,
            Err(pos) => {
                self.shortcuts.insert(pos, s);
                true
            }
        }
    }

    pub fn remove(&mut self, u: Vertex, v: Vertex) -> Option<Shortcut> {
        let pos = self
            .shortcuts
            .binary_search_by_key(&(u, v), |x| (x.u, x.v))
            .ok()?;
        Some(self.shortcuts.remove(pos))
    }

    pub fn contains_pair(&self, u: Vertex, v: Vertex) -> bool {
        self.shortcuts
            .binary_search_by_key(&(u, v), |x| (x.u, x.v))
            .is_ok()
    }

    pub fn len(&self) -> usize {
        self.shortcuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shortcuts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Shortcut> {
        self.shortcuts.iter()
    }

    pub fn as_slice(&self) -> &[Shortcut] {
        &self.shortcuts
    }
}

impl FromIterator<Shortcut> for ShortcutSet {
    fn from_iter<I: IntoIterator<Item = Shortcut>>(iter: I) -> Self {
        let mut set = Self::new();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl<'a> IntoIterator for &'a ShortcutSet {
    type Item = &'a Shortcut;
    type IntoIter = std::slice::Iter<'a, Shortcut>;

    fn into_iter(self) -> Self::IntoIter {
        self.shortcuts.iter()
    }
}

/// Builds the shortcut `(u, v)` with weight `dist(u, v)`. Undirected
/// shortcuts are returned with `u < v`.
pub fn make_shortcut(
    g: &WeightedGraph,
    table: &DistanceTable,
    u: Vertex,
    v: Vertex,
) -> Result<Shortcut, ShortcutError> {
    let not = |reason| ShortcutError::NotAShortcut { u, v, reason };
    let n = g.vertex_count();
    if u >= n || v >= n {
        return Err(not(NotShortcutReason::OutOfRange));
    }
    if u == v {
        return Err(not(NotShortcutReason::SameVertex));
    }
    let pl = table.get(u, v).ok_or(not(NotShortcutReason::Unreachable))?;
    if pl.hops <= 1 {
        return Err(not(NotShortcutReason::AlreadyAdjacent));
    }
    let (a, b) = g.pair_key(u, v);
    Ok(Shortcut::new(a, b, pl.dist))
}

/// Checks a proposed shortcut, including its weight, and returns its
/// canonical form.
pub fn check_shortcut(
    g: &WeightedGraph,
    table: &DistanceTable,
    s: &Shortcut,
) -> Result<Shortcut, ShortcutError> {
    let canonical = make_shortcut(g, table, s.u, s.v)?;
    if canonical.weight != s.weight {
        return Err(ShortcutError::NotAShortcut {
            u: s.u,
            v: s.v,
            reason: NotShortcutReason::WeightMismatch {
                expected: canonical.weight,
            },
        });
    }
    Ok(canonical)
}

/// Adds already-checked shortcuts, dropping any heavier parallel edge.
pub(crate) fn augment<'a, I>(g: &WeightedGraph, shortcuts: I) -> WeightedGraph
where
    I: IntoIterator<Item = &'a Shortcut>,
{
    let mut out = g.clone();
    for s in shortcuts {
        if let Some(w) = out.remove_edge(s.u, s.v) {
            debug_assert!(w > s.weight, "parallel edge must be heavier than its shortcut");
        }
        out.add_edge(s.u, s.v, s.weight)
            .expect("checked shortcut endpoints are valid");
    }
    out
}

fn canonical_set(
    g: &WeightedGraph,
    table: &DistanceTable,
    s: &ShortcutSet,
) -> Result<Vec<Shortcut>, ShortcutError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(s.len());
    for sc in s {
        let c = check_shortcut(g, table, sc)?;
        if !seen.insert((c.u, c.v)) {
            return Err(ShortcutError::DuplicatePair { u: c.u, v: c.v });
        }
        out.push(c);
    }
    Ok(out)
}

/// Returns `g` with the shortcuts added. Weight distances are unchanged.
pub fn apply_shortcuts(g: &WeightedGraph, s: &ShortcutSet) -> Result<WeightedGraph, ShortcutError> {
    let table = all_pairs_shortest_with_hops(g)?;
    let shortcuts = canonical_set(g, &table, s)?;
    Ok(augment(g, &shortcuts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotAShortcut {
        u: Vertex,
        v: Vertex,
        reason: NotShortcutReason,
    },
    DuplicatePair {
        u: Vertex,
        v: Vertex,
    },
    OverBudget {
        size: usize,
        budget: usize,
    },
    StillDeficient {
        count: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotAShortcut { u, v, reason } => write!(f, "({u}, {v}) is not a shortcut: {reason}"),
            Self::DuplicatePair { u, v } => write!(f, "pair ({u}, {v}) listed twice"),
            Self::OverBudget { size, budget } => {
                write!(f, "{size} shortcuts exceed the budget of {budget}")
            }
            Self::StillDeficient { count } => {
                write!(f, "{count} vertices still lack a ball")
            }
        }
    }
}

/// Outcome of checking a candidate shortcut set.
///
/// `report` describes the graph augmented with every legal member of the
/// set, so it is meaningful even when `valid` is false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub report: DeficiencyReport,
}

pub fn verify_shortcut_set(
    g: &WeightedGraph,
    p: Params,
    s: &ShortcutSet,
) -> Result<Verification, GraphError> {
    let table = all_pairs_shortest_with_hops(g)?;
    verify_with_table(g, &table, p, s)
}

pub(crate) fn verify_with_table(
    g: &WeightedGraph,
    table: &DistanceTable,
    p: Params,
    s: &ShortcutSet,
) -> Result<Verification, GraphError> {
    let mut violations = Vec::new();
    let mut legal: BTreeMap<(Vertex, Vertex), Shortcut> = BTreeMap::new();
    for sc in s {
        match check_shortcut(g, table, sc) {
            Ok(c) => {
                if legal.insert((c.u, c.v), c).is_some() {
                    violations.push(Violation::DuplicatePair { u: c.u, v: c.v });
                }
            }
            Err(ShortcutError::NotAShortcut { u, v, reason }) => {
                violations.push(Violation::NotAShortcut { u, v, reason })
            }
            Err(e) => unreachable!("check_shortcut only reports NotAShortcut: {e}"),
        }
    }
    if let Some(budget) = s.budget {
        if s.len() > budget {
            violations.push(Violation::OverBudget {
                size: s.len(),
                budget,
            });
        }
    }
    let augmented = augment(g, legal.values());
    let after = all_pairs_shortest_with_hops(&augmented)?;
    let report = deficiency_from_table(&after, p);
    if !report.deficient.is_empty() {
        violations.push(Violation::StillDeficient {
            count: report.deficient.len(),
        });
    }
    Ok(Verification {
        valid: violations.is_empty(),
        violations,
        report,
    })
}

/// Lexicographically smallest vertex sequence among the shortest paths
/// from `u` to `v` that use the fewest hops.
pub fn fewest_hops_path(
    g: &WeightedGraph,
    table: &DistanceTable,
    u: Vertex,
    v: Vertex,
) -> Option<Vec<Vertex>> {
    let mut target = table.get(u, v)?;
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        let next = g
            .neighbors(cur)
            .iter()
            .filter(|&&(y, w)| {
                table.get(y, v).is_some_and(|rest| {
                    rest.hops + 1 == target.hops && w.checked_add(rest.dist) == Some(target.dist)
                })
            })
            .map(|&(y, _)| y)
            .min()?;
        target = table.get(next, v)?;
        path.push(next);
        cur = next;
    }
    Some(path)
}

/// Rewrites a valid (k, k+1)-shortcut set so that every shortcut spans
/// exactly two hops of the original graph, without growing the set.
///
/// A shortcut spanning `i > 2` hops along `p_0, ..., p_i` is replaced by
/// `{p_{i-2}, p_i}`.
pub fn normalize_to_hop2(
    g: &WeightedGraph,
    p: Params,
    s: &ShortcutSet,
) -> Result<ShortcutSet, ShortcutError> {
    if p.rho != p.k + 1 {
        return Err(ShortcutError::PreconditionViolated(format!(
            "hop-2 normalization requires rho = k + 1 (got k={}, rho={})",
            p.k, p.rho
        )));
    }
    let table = all_pairs_shortest_with_hops(g)?;
    let before = verify_with_table(g, &table, p, s)?;
    if !before.valid {
        return Err(ShortcutError::PreconditionViolated(format!(
            "input shortcut set does not verify: {}",
            before.violations[0]
        )));
    }
    let mut out = ShortcutSet {
        shortcuts: Vec::new(),
        budget: s.budget,
    };
    for sc in s {
        let hops = table.hops(sc.u, sc.v).expect("verified shortcut is reachable");
        if hops == 2 {
            out.insert(make_shortcut(g, &table, sc.u, sc.v)?);
            continue;
        }
        let path = fewest_hops_path(g, &table, sc.u, sc.v).expect("verified shortcut is reachable");
        let i = path.len() - 1;
        out.insert(make_shortcut(g, &table, path[i - 2], path[i])?);
    }
    if !verify_with_table(g, &table, p, &out)?.valid {
        return Err(ShortcutError::NormalizationFailed);
    }
    Ok(out)
}

/// The deficient vertices of `report` that gain a ball once `candidate`
/// alone is added to `g`.
pub fn coverage_set(
    g: &WeightedGraph,
    p: Params,
    candidate: &Shortcut,
    report: &DeficiencyReport,
) -> Result<BTreeSet<Vertex>, ShortcutError> {
    let table = all_pairs_shortest_with_hops(g)?;
    coverage_with_table(g, &table, p, candidate, report)
}

pub(crate) fn coverage_with_table(
    g: &WeightedGraph,
    table: &DistanceTable,
    p: Params,
    candidate: &Shortcut,
    report: &DeficiencyReport,
) -> Result<BTreeSet<Vertex>, ShortcutError> {
    let c = check_shortcut(g, table, candidate)?;
    let augmented = augment(g, [&c]);
    let after = all_pairs_shortest_with_hops(&augmented)?;
    Ok(report
        .deficient
        .iter()
        .copied()
        .filter(|&x| crate::graph::ball_certificate(&after, p, x).has_ball)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::deficient_vertices;

    fn path(n: usize, directed: bool) -> WeightedGraph {
        WeightedGraph::from_edges(n, directed, (1..n).map(|i| (i - 1, i, 1))).unwrap()
    }

    fn p(k: usize, rho: usize) -> Params {
        Params::new(k, rho).unwrap()
    }

    #[test]
    fn make_shortcut_cases() {
        let g = path(3, true);
        let t = all_pairs_shortest_with_hops(&g).unwrap();
        assert_eq!(make_shortcut(&g, &t, 0, 2).unwrap(), Shortcut::new(0, 2, 2));
        assert!(matches!(
            make_shortcut(&g, &t, 0, 1),
            Err(ShortcutError::NotAShortcut {
                reason: NotShortcutReason::AlreadyAdjacent,
                ..
            })
        ));
        assert!(matches!(
            make_shortcut(&g, &t, 2, 0),
            Err(ShortcutError::NotAShortcut {
                reason: NotShortcutReason::Unreachable,
                ..
            })
        ));
        let u = path(3, false);
        let t = all_pairs_shortest_with_hops(&u).unwrap();
        assert_eq!(make_shortcut(&u, &t, 2, 0).unwrap(), Shortcut::new(0, 2, 2));
    }

    #[test]
    fn apply_replaces_heavier_parallel_edge() {
        let g = WeightedGraph::from_edges(3, true, [(0, 1, 1), (1, 2, 1), (0, 2, 5)]).unwrap();
        let before = all_pairs_shortest_with_hops(&g).unwrap();
        let s: ShortcutSet = [Shortcut::new(0, 2, 2)].into_iter().collect();
        let h = apply_shortcuts(&g, &s).unwrap();
        assert_eq!(h.weight(0, 2), Some(2));
        assert_eq!(h.edge_count(), 3);
        let after = all_pairs_shortest_with_hops(&h).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(before.dist(u, v), after.dist(u, v));
            }
        }
        assert_eq!(after.hops(0, 2), Some(1));
        assert_eq!(apply_shortcuts(&g, &ShortcutSet::new()).unwrap(), g);
    }

    #[test]
    fn verify_directed_p5() {
        let g = path(5, true);
        let s: ShortcutSet = [Shortcut::new(0, 2, 2), Shortcut::new(1, 3, 2)]
            .into_iter()
            .collect();
        let v = verify_shortcut_set(&g, p(2, 3), &s).unwrap();
        assert!(v.valid, "{:?}", v.violations);
        let v = verify_shortcut_set(&g, p(2, 3), &ShortcutSet::new()).unwrap();
        assert!(!v.valid);
        assert_eq!(v.report.deficient, BTreeSet::from([0, 1]));
        let bad: ShortcutSet = [Shortcut::new(0, 1, 1)].into_iter().collect();
        let v = verify_shortcut_set(&g, p(2, 3), &bad).unwrap();
        assert!(matches!(v.violations[0], Violation::NotAShortcut { .. }));
    }

    #[test]
    fn verify_flags_budget_and_undirected_duplicates() {
        let g = path(5, false);
        let mut s = ShortcutSet::with_budget(1);
        s.insert(Shortcut::new(1, 3, 2));
        s.insert(Shortcut::new(3, 1, 2));
        let v = verify_shortcut_set(&g, p(2, 3), &s).unwrap();
        assert!(v.violations.contains(&Violation::DuplicatePair { u: 1, v: 3 }));
        assert!(v.violations.contains(&Violation::OverBudget { size: 2, budget: 1 }));
        assert!(v.report.deficient.is_empty());
    }

    #[test]
    fn normalize_p4_shortcut() {
        let g = path(4, false);
        let s: ShortcutSet = [Shortcut::new(0, 3, 3)].into_iter().collect();
        let out = normalize_to_hop2(&g, p(2, 3), &s).unwrap();
        assert_eq!(out.as_slice(), &[Shortcut::new(1, 3, 2)]);
        let same: ShortcutSet = [Shortcut::new(1, 3, 2)].into_iter().collect();
        assert_eq!(normalize_to_hop2(&g, p(2, 3), &same).unwrap(), same);
    }

    #[test]
    fn normalize_merges_coinciding_shortcuts() {
        // Undirected path 0-1-2-3-4-5-6, k = 3, rho = 4. Both {0,5} and
        // {2,5} normalize to {3,5}.
        let g = path(7, false);
        let params = p(3, 4);
        let s: ShortcutSet = [Shortcut::new(0, 5, 5), Shortcut::new(2, 5, 3), Shortcut::new(1, 4, 3)]
            .into_iter()
            .collect();
        let v = verify_shortcut_set(&g, params, &s).unwrap();
        assert!(v.valid, "{:?}", v.violations);
        let out = normalize_to_hop2(&g, params, &s).unwrap();
        assert!(out.len() < s.len());
        let t = all_pairs_shortest_with_hops(&g).unwrap();
        assert!(out.iter().all(|c| t.hops(c.u, c.v) == Some(2)));
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let g = path(4, false);
        assert!(matches!(
            normalize_to_hop2(&g, p(2, 4), &ShortcutSet::new()),
            Err(ShortcutError::PreconditionViolated(_))
        ));
        assert!(matches!(
            normalize_to_hop2(&g, p(2, 3), &ShortcutSet::new()),
            Err(ShortcutError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn coverage_on_undirected_p5() {
        let g = path(5, false);
        let params = p(2, 3);
        let x = deficient_vertices(&g, params).unwrap();
        let cov = coverage_set(&g, params, &Shortcut::new(1, 3, 2), &x).unwrap();
        assert_eq!(cov, BTreeSet::from([0, 4]));
        let cov = coverage_set(&g, params, &Shortcut::new(0, 2, 2), &x).unwrap();
        assert_eq!(cov, BTreeSet::from([0]));
        // {2,4} lets vertex 4 reach 2 in one hop; vertex 0 is unaffected.
        let cov = coverage_set(&g, params, &Shortcut::new(2, 4, 2), &x).unwrap();
        assert_eq!(cov, BTreeSet::from([4]));
    }

    #[test]
    fn coverage_empty_when_nothing_fixed() {
        let g = path(6, true);
        let params = p(2, 4);
        let x = deficient_vertices(&g, params).unwrap();
        assert_eq!(x.deficient, BTreeSet::from([0, 1, 2]));
        // Vertex 0 still needs four hops to reach vertex 4.
        let cov = coverage_set(&g, params, &Shortcut::new(0, 2, 2), &x).unwrap();
        assert!(cov.is_empty());
    }
}
