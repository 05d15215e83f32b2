//! Browser bindings. Every entry point takes text in the usual file formats
//! and returns a JSON string; the page in `www/` draws the result.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use krho::format::{parse_graph, parse_hypergraph, write_graph};
use krho::hardness::{reduce_thm1, reduce_tiebreaker};
use krho::kk1::solve_kk1;
use krho::solvers::{solve_exact, solve_greedy, CandidatePool, ExactOptions};
use krho::{all_pairs_shortest_with_hops, deficient_vertices, BallCertificate, Params, Shortcut, Vertex, Weight, WeightedGraph};

/// Search cap for the exact solver in the page; keeps the tab responsive.
const NODE_CAP: u64 = 200_000;

#[derive(Serialize)]
struct Drawing {
    n: usize,
    directed: bool,
    edges: Vec<(Vertex, Vertex, Weight)>,
}

impl Drawing {
    fn of(g: &WeightedGraph) -> Self {
        Self {
            n: g.vertex_count(),
            directed: g.is_directed(),
            edges: g.edges().collect(),
        }
    }
}

#[derive(Serialize)]
struct Analysis {
    graph: Drawing,
    deficient: Vec<Vertex>,
    certificates: Vec<BallCertificate>,
}

#[derive(Serialize)]
struct Solution {
    graph: Drawing,
    deficient: Vec<Vertex>,
    algorithm: String,
    optimal: bool,
    shortcuts: Vec<Shortcut>,
}

#[derive(Serialize)]
struct Reduction {
    graph: Drawing,
    text: String,
    starts: Vec<Vertex>,
    deficient: Vec<Vertex>,
}

fn params(k: usize, rho: usize) -> Result<Params, String> {
    Params::new(k, rho).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn analyze_text(graph: &str, k: usize, rho: usize) -> Result<String, String> {
    let g = parse_graph(graph).map_err(|e| e.to_string())?;
    let report = deficient_vertices(&g, params(k, rho)?).map_err(|e| e.to_string())?;
    to_json(&Analysis {
        graph: Drawing::of(&g),
        deficient: report.deficient.iter().copied().collect(),
        certificates: report.certificates,
    })
}

pub fn solve_text(graph: &str, k: usize, rho: usize, algorithm: &str) -> Result<String, String> {
    let g = parse_graph(graph).map_err(|e| e.to_string())?;
    let p = params(k, rho)?;
    let report = deficient_vertices(&g, p).map_err(|e| e.to_string())?;
    let result = match algorithm {
        "kk1" => solve_kk1(&g, p, None).map_err(|e| e.to_string())?,
        "exact" | "greedy" => {
            let table = all_pairs_shortest_with_hops(&g).map_err(|e| e.to_string())?;
            let pool = CandidatePool::full(&g, &table);
            if algorithm == "exact" {
                let opts = ExactOptions {
                    limit: None,
                    node_cap: NODE_CAP,
                };
                solve_exact(&g, p, &pool, opts)
            } else {
                solve_greedy(&g, p, &pool)
            }
            .map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown algorithm `{other}`")),
    };
    to_json(&Solution {
        graph: Drawing::of(&g),
        deficient: report.deficient.iter().copied().collect(),
        algorithm: algorithm.to_string(),
        optimal: result.optimal,
        shortcuts: result.shortcuts.iter().copied().collect(),
    })
}

pub fn reduce_text(hypergraph: &str, k: usize, rho: usize, tiebreaker: bool, directed: bool) -> Result<String, String> {
    let h = parse_hypergraph(hypergraph).map_err(|e| e.to_string())?;
    let layout = if tiebreaker {
        reduce_tiebreaker(&h, k, rho, directed)
    } else {
        reduce_thm1(&h, k, rho, directed)
    }
    .map_err(|e| e.to_string())?;
    let report = deficient_vertices(&layout.graph, params(k, rho)?).map_err(|e| e.to_string())?;
    to_json(&Reduction {
        graph: Drawing::of(&layout.graph),
        text: write_graph(&layout.graph),
        starts: layout.roles.starts().into_iter().collect(),
        deficient: report.deficient.iter().copied().collect(),
    })
}

#[wasm_bindgen]
pub fn analyze(graph: &str, k: usize, rho: usize) -> Result<String, JsError> {
    analyze_text(graph, k, rho).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve(graph: &str, k: usize, rho: usize, algorithm: &str) -> Result<String, JsError> {
    solve_text(graph, k, rho, algorithm).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn reduce(hypergraph: &str, k: usize, rho: usize, tiebreaker: bool, directed: bool) -> Result<String, JsError> {
    reduce_text(hypergraph, k, rho, tiebreaker, directed).map_err(|e| JsError::new(&e))
}
