//! Line-oriented text formats for graphs, hypergraphs and shortcut sets.
//!
//! ```text
//! krho-graph v1        krho-hyper v1        krho-shortcuts v1
//! undirected           4 2                  0 2 2
//! 3 2                  2 0 1                1 3 2
//! 0 1 1                3 1 2 3
//! 1 2 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Writers emit the
//! canonical form (edges sorted), so `parse(write(x)) == x`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, Vertex, Weight, WeightedGraph};
use crate::hardness::Hypergraph;
use crate::shortcut::{Shortcut, ShortcutSet};

pub const GRAPH_HEADER: &str = "krho-graph v1";
pub const HYPER_HEADER: &str = "krho-hyper v1";
pub const SHORTCUT_HEADER: &str = "krho-shortcuts v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let line = raw.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        self.next_content()
            .ok_or_else(|| err(self.last + 1, format!("unexpected end of input, expected {what}")))
    }
}

fn header(lines: &mut Lines, expected: &str) -> Result<(), FormatError> {
    let (no, line) = lines.expect("header")?;
    if line != expected {
        return Err(err(no, format!("expected header `{expected}`, found `{line}`")));
    }
    Ok(())
}

fn ints<const N: usize>(no: usize, line: &str, names: [&str; N]) -> Result<[u64; N], FormatError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != N {
        return Err(err(
            no,
            format!("expected {N} fields ({}), found {}", names.join(" "), fields.len()),
        ));
    }
    let mut out = [0u64; N];
    for (i, f) in fields.iter().enumerate() {
        out[i] = f
            .parse()
            .map_err(|_| err(no, format!("{} must be a non-negative integer, found `{f}`", names[i])))?;
    }
    Ok(out)
}

fn vertex(no: usize, raw: u64, n: usize) -> Result<Vertex, FormatError> {
    usize::try_from(raw)
        .ok()
        .filter(|&v| v < n)
        .ok_or_else(|| err(no, format!("vertex {raw} out of range 0..{n}")))
}

fn usize_field(no: usize, raw: u64) -> Result<usize, FormatError> {
    usize::try_from(raw).map_err(|_| err(no, format!("{raw} does not fit in memory")))
}

fn no_trailing(lines: &mut Lines) -> Result<(), FormatError> {
    match lines.next_content() {
        Some((no, line)) => Err(err(no, format!("unexpected trailing content `{line}`"))),
        None => Ok(()),
    }
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    let _ = writeln!(out, "{GRAPH_HEADER}\n{kind}\n{} {}", g.vertex_count(), g.edge_count());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, GRAPH_HEADER)?;
    let (no, kind) = lines.expect("`directed` or `undirected`")?;
    let directed = match kind {
        "directed" => true,
        "undirected" => false,
        other => return Err(err(no, format!("expected `directed` or `undirected`, found `{other}`"))),
    };
    let (no, line) = lines.expect("`n m`")?;
    let [n, m] = ints(no, line, ["n", "m"])?;
    let n = usize_field(no, n)?;
    let mut g = WeightedGraph::new(n, directed);
    for _ in 0..m {
        let (no, line) = lines.expect("edge line `u v w`")?;
        let [u, v, w] = ints(no, line, ["u", "v", "w"])?;
        let (u, v) = (vertex(no, u, n)?, vertex(no, v, n)?);
        g.add_edge(u, v, w as Weight).map_err(|e| match e {
            GraphError::ZeroWeight { .. } => err(no, "weight must be a positive integer"),
            GraphError::DuplicateEdge { .. } => err(no, format!("duplicate edge ({u}, {v})")),
            other => err(no, other.to_string()),
        })?;
    }
    no_trailing(&mut lines)?;
    Ok(g)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HYPER_HEADER}\n{} {}", h.vertex_count(), h.hyperedges().len());
    for e in h.hyperedges() {
        let _ = write!(out, "{}", e.len());
        for v in e {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, HYPER_HEADER)?;
    let (no, line) = lines.expect("`n m`")?;
    let [n, m] = ints(no, line, ["n", "m"])?;
    let n = usize_field(no, n)?;
    let mut edges = Vec::new();
    for i in 0..m {
        let (no, line) = lines.expect("hyperedge line `size ids...`")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let size: usize = fields[0]
            .parse()
            .map_err(|_| err(no, format!("hyperedge size must be an integer, found `{}`", fields[0])))?;
        if size == 0 {
            return Err(err(no, "hyperedge must be nonempty"));
        }
        if fields.len() != size + 1 {
            return Err(err(no, format!("hyperedge declares {size} vertices but lists {}", fields.len() - 1)));
        }
        let mut e = Vec::with_capacity(size);
        for f in &fields[1..] {
            let raw: u64 = f
                .parse()
                .map_err(|_| err(no, format!("vertex id must be an integer, found `{f}`")))?;
            let v = vertex(no, raw, n)?;
            if e.contains(&v) {
                return Err(err(no, format!("hyperedge {i} repeats vertex {v}")));
            }
            e.push(v);
        }
        edges.push(e);
    }
    no_trailing(&mut lines)?;
    Hypergraph::new(n, edges).map_err(|e| err(0, e.to_string()))
}

pub fn write_shortcuts(s: &ShortcutSet) -> String {
    let mut out = format!("{SHORTCUT_HEADER}\n");
    for sc in s {
        let _ = writeln!(out, "{} {} {}", sc.u, sc.v, sc.weight);
    }
    out
}

/// Parses a shortcut list for a graph on `n` vertices. Shortcut legality
/// against a concrete graph is the verifier's job, not the parser's.
pub fn parse_shortcuts(text: &str, n: usize) -> Result<ShortcutSet, FormatError> {
    let mut lines = Lines::new(text);
    header(&mut lines, SHORTCUT_HEADER)?;
    let mut set = ShortcutSet::new();
    while let Some((no, line)) = lines.next_content() {
        let [u, v, w] = ints(no, line, ["u", "v", "w"])?;
        let (u, v) = (vertex(no, u, n)?, vertex(no, v, n)?);
        if w == 0 {
            return Err(err(no, "weight must be a positive integer"));
        }
        if !set.insert(Shortcut::new(u, v, w as Weight)) {
            return Err(err(no, format!("duplicate shortcut ({u}, {v})")));
        }
    }
    Ok(set)
}
