//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::centrality::{bc_pair_formula, format_significant};
use crate::graph::{parse_graph, parse_trace, Graph, UpdateOp};
use crate::oracle::{sp_parameters, static_apasp};
use crate::random;
use crate::session::Session;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "apasp", version, about = "Decremental all-pairs all-shortest-paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Graph file
    #[arg(short = 'g', value_name = "PATH")]
    graph: PathBuf,
    /// Update trace to replay before answering
    #[arg(short = 't', value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the tuple system and print a summary
    Build {
        /// Graph file
        #[arg(short = 'g', value_name = "PATH")]
        graph: PathBuf,
    },
    /// Replay an update trace
    Update {
        #[command(flatten)]
        inputs: Inputs,
        /// Compare against a fresh rebuild after every update
        #[arg(long)]
        verify: bool,
    },
    /// Print distance and shortest-path count for a pair
    Query {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_name = "X,Y")]
        pair: String,
    },
    /// Print the canonical dump
    Dump {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print betweenness centrality scores
    Bc {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Check the maintained system and scores against the oracle after
    /// every update
    Verify {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Emit per-update counters as JSON lines
    Bench {
        /// Graph file
        #[arg(short = 'g', value_name = "PATH", required_unless_present = "random")]
        graph: Option<PathBuf>,
        /// Update trace
        #[arg(short = 't', value_name = "PATH", requires = "graph")]
        trace: Option<PathBuf>,
        /// Generate a graph with n vertices, m edges and a trace of the given length
        #[arg(long, value_name = "N,M,UPDATES", conflicts_with = "graph")]
        random: Option<String>,
        /// Seed for --random
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CliResult = Result<(), Failure>;

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(inputs: &Inputs) -> Result<(Graph, Vec<UpdateOp>), Failure> {
    let g = parse_graph(&read(&inputs.graph)?)
        .map_err(|e| input_error(format!("{}: {e}", inputs.graph.display())))?;
    let ops = match &inputs.trace {
        Some(t) => parse_trace(&g, &read(t)?).map_err(|e| input_error(format!("{}: {e}", t.display())))?,
        None => Vec::new(),
    };
    Ok((g, ops))
}

fn apply(session: &mut Session, op: &UpdateOp, index: usize) -> CliResult {
    session
        .apply(op)
        .map(|_| ())
        .map_err(|e| input_error(format!("update {}: {e}", index + 1)))
}

fn replay(inputs: &Inputs) -> Result<Session, Failure> {
    let (g, ops) = load(inputs)?;
    let mut session = Session::new(g);
    for (i, op) in ops.iter().enumerate() {
        apply(&mut session, op, i)?;
    }
    Ok(session)
}

fn io(e: std::io::Error) -> Failure {
    input_error(format!("write failed: {e}"))
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Build { graph } => {
            let g = parse_graph(&read(&graph)?)
                .map_err(|e| input_error(format!("{}: {e}", graph.display())))?;
            let o = static_apasp(&g);
            let params = sp_parameters(&g, &o);
            let session = Session::new(g);
            let ts = session.tuples();
            writeln!(out, "n {}", session.graph().vertex_count()).map_err(io)?;
            writeln!(out, "m {}", session.graph().edge_count()).map_err(io)?;
            writeln!(out, "triples {}", ts.triple_count()).map_err(io)?;
            writeln!(out, "shortest_triples {}", ts.star_triple_count()).map_err(io)?;
            writeln!(out, "m_star {}", params.m_star).map_err(io)?;
            writeln!(out, "nu_star {}", params.nu_star).map_err(io)?;
        }
        Command::Update { inputs, verify } => {
            let (g, ops) = load(&inputs)?;
            let mut session = Session::new(g);
            for (i, op) in ops.iter().enumerate() {
                apply(&mut session, op, i)?;
                let label = session.graph().label(op.vertex).to_string();
                if verify {
                    session.verify().map_err(|report| Failure {
                        code: EXIT_VERIFY,
                        message: format!("update {} diverged from rebuild:\n{report}", i + 1),
                    })?;
                    writeln!(out, "update {} {label} verified", i + 1).map_err(io)?;
                } else {
                    writeln!(out, "update {} {label}", i + 1).map_err(io)?;
                }
            }
            writeln!(out, "triples {}", session.tuples().triple_count()).map_err(io)?;
        }
        Command::Query { inputs, pair } => {
            let session = replay(&inputs)?;
            let g = session.graph();
            let (xs, ys) = pair
                .split_once(',')
                .ok_or_else(|| input_error(format!("--pair expects x,y, got {pair:?}")))?;
            let lookup = |l: &str| g.vertex(l).ok_or_else(|| input_error(format!("unknown vertex {l}")));
            let (x, y) = (lookup(xs)?, lookup(ys)?);
            let ts = session.tuples();
            writeln!(out, "{} {}", ts.distance(x, y), ts.sigma(x, y)).map_err(io)?;
        }
        Command::Dump { inputs } => {
            let session = replay(&inputs)?;
            out.write_all(session.dump().as_bytes()).map_err(io)?;
        }
        Command::Bc { inputs } => {
            let session = replay(&inputs)?;
            for line in session.betweenness().lines(session.graph()) {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Command::Verify { inputs } => {
            let (g, ops) = load(&inputs)?;
            let mut session = Session::new(g);
            verify_state(&session, 0)?;
            for (i, op) in ops.iter().enumerate() {
                apply(&mut session, op, i)?;
                verify_state(&session, i + 1)?;
            }
            writeln!(out, "ok {} updates", ops.len()).map_err(io)?;
        }
        Command::Bench {
            graph,
            trace,
            random: spec,
            seed,
        } => {
            let (g, ops) = match (graph, spec) {
                (Some(graph), _) => load(&Inputs { graph, trace })?,
                (None, Some(spec)) => {
                    let (n, m, len) = parse_random_spec(&spec)?;
                    let mut rng = random::rng(seed);
                    let g = random::random_graph_with_edges(&mut rng, n, m);
                    let ops = random::random_trace(&mut rng, &g, len);
                    (g, ops)
                }
                (None, None) => return Err(input_error("bench needs -g or --random")),
            };
            let mut session = Session::new(g);
            for (i, op) in ops.iter().enumerate() {
                let stats = session
                    .apply(op)
                    .map_err(|e| input_error(format!("update {}: {e}", i + 1)))?;
                let line = serde_json::to_string(&stats).map_err(|e| input_error(e.to_string()))?;
                writeln!(out, "{line}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn verify_state(session: &Session, after: usize) -> CliResult {
    let diverged = |what: String| Failure {
        code: EXIT_VERIFY,
        message: format!("after {after} updates: {what}"),
    };
    session
        .verify()
        .map_err(|report| diverged(format!("tuple system diverged from rebuild:\n{report}")))?;
    let ours = session.betweenness();
    let reference = bc_pair_formula(&static_apasp(session.graph()));
    let gap = ours.max_abs_diff(&reference);
    if gap > 1e-9 {
        return Err(diverged(format!(
            "betweenness differs from the pair formula by {}",
            format_significant(gap, 6)
        )));
    }
    Ok(())
}

fn parse_random_spec(spec: &str) -> Result<(usize, usize, usize), Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    let bad = || input_error(format!("--random expects n,m,updates, got {spec:?}"));
    let [n, m, u] = parts.as_slice() else {
        return Err(bad());
    };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let n = num(n)?;
    if n == 0 {
        return Err(input_error("--random needs at least one vertex"));
    }
    Ok((n, num(m)?, num(u)?))
}
