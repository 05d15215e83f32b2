//! Tools for the minimum (k, rho)-shortcut problem: make every vertex of a
//! weighted graph reach a set of its `rho` closest vertices along shortest
//! paths of at most `k` edges by adding as few distance-preserving edges as
//! possible.

pub mod format;
pub mod graph;
pub mod hardness;
pub mod kk1;
pub mod oracle;
pub mod selftest;
pub mod shortcut;
pub mod solvers;

pub use graph::{
    all_pairs_shortest_with_hops, ball_certificate, deficient_vertices, rho_closest_union,
    BallCertificate, DeficiencyReport, DistanceTable, GraphError, Params, PathLen, Vertex,
    Weight, WeightedGraph,
};
pub use shortcut::{
    apply_shortcuts, coverage_set, make_shortcut, normalize_to_hop2, verify_shortcut_set,
    Shortcut, ShortcutError, ShortcutSet, Verification, Violation,
};
