//! `krho`: verify, analyse, solve and generate (k, rho)-shortcut instances.
//!
//! Exit status: 0 on success, 1 when the computed answer is negative
//! (verification failed, no solution within the budget, a self-test
//! criterion failed), 2 when nothing could be computed (bad arguments,
//! malformed input, violated preconditions, exhausted search caps).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use krho::format::{parse_graph, parse_hypergraph, parse_shortcuts, write_graph, write_hypergraph, write_shortcuts};
use krho::hardness::{random_graph, random_hypergraph, reduce_thm1, reduce_tiebreaker, solve_hitting_exact};
use krho::kk1::{solve_kk1, VertexOrdering};
use krho::selftest::{run_all, Sizes};
use krho::solvers::{solve_exact, solve_greedy, solve_k1, CandidatePool, ExactOptions, SolveError, DEFAULT_NODE_CAP};
use krho::{all_pairs_shortest_with_hops, deficient_vertices, verify_shortcut_set, GraphError, Params, WeightedGraph};

use report::{write_report, DeficientSummary, Report, SolutionSummary, VerificationSummary};

#[derive(Parser)]
#[command(name = "krho", version, about = "Minimum (k, rho)-shortcut toolkit")]
struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Hop budget.
    #[arg(short = 'k', long = "k")]
    k: usize,
    /// Number of closest vertices every ball must contain.
    #[arg(short = 'r', long = "rho")]
    rho: usize,
}

impl ParamArgs {
    fn params(self) -> Result<Params> {
        Ok(Params::new(self.k, self.rho)?)
    }
}

#[derive(Args, Clone, Copy, Default)]
struct Orientation {
    /// Treat the instance as directed.
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    /// Treat the instance as undirected.
    #[arg(long)]
    undirected: bool,
}

impl Orientation {
    fn choice(self) -> Option<bool> {
        match (self.directed, self.undirected) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a shortcut set turns the graph into a (k, rho)-graph.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        graph: PathBuf,
        #[arg(long)]
        shortcuts: PathBuf,
        /// Maximum allowed number of shortcuts.
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        orientation: Orientation,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// List the vertices without a (k, rho)-ball, with certificates.
    Deficient {
        #[command(flatten)]
        params: ParamArgs,
        graph: PathBuf,
        #[command(flatten)]
        orientation: Orientation,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Compute a shortcut set.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Exact)]
        algo: Algo,
        /// Largest solution size the exact search may try.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
        /// Seed for a random vertex ordering (kk1); identity when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        orientation: Orientation,
        /// Write the shortcut file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Build a hard instance from a hypergraph.
    Reduce {
        #[arg(value_enum)]
        construction: ConstructionArg,
        hypergraph: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Orientation of the emitted graph (directed by default).
        #[command(flatten)]
        orientation: Orientation,
        /// Graph file to write.
        #[arg(long)]
        out: PathBuf,
        /// Role-map JSON to write; defaults to `<out>.roles.json`.
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Generate random instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Brute-force reference solvers.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Run the randomised oracle-equivalence suites.
    Selftest {
        /// Smaller samples for a fast smoke run.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Write the outcomes as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    RandomGraph {
        #[arg(long)]
        n: usize,
        /// Edge probability per vertex pair.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        max_weight: u64,
        #[command(flatten)]
        orientation: Orientation,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    RandomHypergraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Maximum hyperedge size.
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Minimum hitting set, or whether one of size at most `alpha` exists.
    Hitting {
        hypergraph: PathBuf,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Greedy,
    K1,
    Kk1,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Thm1,
    Tiebreaker,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reorient(g: WeightedGraph, directed: Option<bool>) -> Result<WeightedGraph> {
    let Some(directed) = directed.filter(|&d| d != g.is_directed()) else {
        return Ok(g);
    };
    let mut h = WeightedGraph::new(g.vertex_count(), directed);
    for (u, v, w) in g.edges() {
        match h.add_edge(u, v, w) {
            Ok(()) => {}
            Err(GraphError::DuplicateEdge { .. }) if h.weight(u, v) == Some(w) => {}
            Err(e) => bail!("cannot reorient edge ({u}, {v}): {e}"),
        }
        if directed {
            h.add_edge(v, u, w)?;
        }
    }
    Ok(h)
}

fn load_graph(path: &Path, orientation: Orientation) -> Result<WeightedGraph> {
    let g = parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    reorient(g, orientation.choice())
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let start = Instant::now();
    let elapsed = |timing: bool| timing.then(|| start.elapsed().as_secs_f64() * 1000.0);
    match cli.command {
        Command::Verify {
            params,
            graph,
            shortcuts,
            budget,
            orientation,
            out,
            timing,
        } => {
            let p = params.params()?;
            let g = load_graph(&graph, orientation)?;
            let mut s = parse_shortcuts(&read(&shortcuts)?, g.vertex_count())
                .with_context(|| format!("in {}", shortcuts.display()))?;
            s.budget = budget;
            let v = verify_shortcut_set(&g, p, &s)?;
            let mut report = Report::new("verify", &g, p);
            report.verification = Some(VerificationSummary::of(&v));
            report.timing_ms = elapsed(timing);
            emit(out.as_deref(), &write_report(&report))?;
            Ok(if v.valid { 0 } else { 1 })
        }
        Command::Deficient {
            params,
            graph,
            orientation,
            out,
            timing,
        } => {
            let p = params.params()?;
            let g = load_graph(&graph, orientation)?;
            let d = deficient_vertices(&g, p)?;
            let mut report = Report::new("deficient", &g, p);
            report.deficient = Some(DeficientSummary::of(&d));
            report.timing_ms = elapsed(timing);
            emit(out.as_deref(), &write_report(&report))?;
            Ok(0)
        }
        Command::Solve {
            params,
            graph,
            algo,
            budget,
            node_cap,
            seed,
            orientation,
            out,
            timing,
        } => {
            let p = params.params()?;
            let g = load_graph(&graph, orientation)?;
            let before = deficient_vertices(&g, p)?;
            let (name, result) = match algo {
                Algo::Exact => {
                    let table = all_pairs_shortest_with_hops(&g)?;
                    let pool = CandidatePool::full(&g, &table);
                    let opts = ExactOptions { limit: budget, node_cap };
                    ("exact", solve_exact(&g, p, &pool, opts))
                }
                Algo::Greedy => {
                    let table = all_pairs_shortest_with_hops(&g)?;
                    let pool = CandidatePool::full(&g, &table);
                    ("greedy", solve_greedy(&g, p, &pool))
                }
                Algo::K1 => {
                    if p.k != 1 {
                        bail!("--algo k1 needs -k 1 (got {})", p.k);
                    }
                    ("k1", solve_k1(&g, p.rho))
                }
                Algo::Kk1 => {
                    let phi = seed.map(|s| VertexOrdering::random(g.vertex_count(), s));
                    ("kk1", solve_kk1(&g, p, phi).map_err(|e| SolveError::InvalidRequest(e.to_string())))
                }
            };
            let result = match result {
                Ok(r) => r,
                Err(e @ (SolveError::InfeasibleWithinPool { .. } | SolveError::Stalled { .. })) => {
                    eprintln!("no solution: {e}");
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let check = verify_shortcut_set(&g, p, &result.shortcuts)?;
            if !check.valid {
                bail!("internal error: the {name} solution does not verify");
            }
            if let Some(path) = &out {
                write(path, &write_shortcuts(&result.shortcuts))?;
            }
            let mut report = Report::new("solve", &g, p);
            report.deficient = Some(DeficientSummary::of(&before));
            report.solution = Some(SolutionSummary::of(name, &result));
            report.verification = Some(VerificationSummary::of(&check));
            report.timing_ms = elapsed(timing);
            print!("{}", write_report(&report));
            Ok(0)
        }
        Command::Reduce {
            construction,
            hypergraph,
            params,
            orientation,
            out,
            roles,
        } => {
            let h = parse_hypergraph(&read(&hypergraph)?).with_context(|| format!("in {}", hypergraph.display()))?;
            let directed = orientation.choice().unwrap_or(true);
            let layout = match construction {
                ConstructionArg::Thm1 => reduce_thm1(&h, params.k, params.rho, directed)?,
                ConstructionArg::Tiebreaker => reduce_tiebreaker(&h, params.k, params.rho, directed)?,
            };
            write(&out, &write_graph(&layout.graph))?;
            let roles = roles.unwrap_or_else(|| {
                let mut name = out.clone().into_os_string();
                name.push(".roles.json");
                name.into()
            });
            write(&roles, &write_report(&layout.roles))?;
            let summary = serde_json::json!({
                "command": "reduce",
                "graph": out,
                "roles": roles,
                "n": layout.graph.vertex_count(),
                "m": layout.graph.edge_count(),
                "path_starts": layout.roles.starts(),
            });
            print!("{}", write_report(&summary));
            Ok(0)
        }
        Command::Gen { what } => match what {
            GenCommand::RandomGraph {
                n,
                p,
                max_weight,
                orientation,
                seed,
                out,
            } => {
                if !(0.0..=1.0).contains(&p) || max_weight == 0 {
                    bail!("need 0 <= p <= 1 and max-weight >= 1");
                }
                let g = random_graph(n, p, max_weight, orientation.choice().unwrap_or(false), seed);
                emit(out.as_deref(), &write_graph(&g))?;
                Ok(0)
            }
            GenCommand::RandomHypergraph { n, m, d, seed, out } => {
                if d == 0 || d > n {
                    bail!("need 1 <= d <= n (got d={d}, n={n})");
                }
                emit(out.as_deref(), &write_hypergraph(&random_hypergraph(n, m, d, seed)))?;
                Ok(0)
            }
        },
        Command::Oracle {
            what: OracleCommand::Hitting {
                hypergraph,
                alpha,
                node_cap,
            },
        } => {
            let h = parse_hypergraph(&read(&hypergraph)?).with_context(|| format!("in {}", hypergraph.display()))?;
            let found = solve_hitting_exact(&h, alpha, node_cap)?;
            let summary = serde_json::json!({
                "command": "oracle hitting",
                "alpha": alpha,
                "found": found.is_some(),
                "size": found.as_ref().map(|u| u.len()),
                "vertices": found.as_ref().map(|u| &u.vertices),
            });
            print!("{}", write_report(&summary));
            Ok(if found.is_some() { 0 } else { 1 })
        }
        Command::Selftest { quick, seed, out } => {
            let outcomes = run_all(if quick { Sizes::QUICK } else { Sizes::FULL }, seed);
            for o in &outcomes {
                println!("{}", o.line());
                for s in &o.samples {
                    println!("    {s}");
                }
            }
            if let Some(path) = &out {
                write(path, &write_report(&outcomes))?;
            }
            Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
