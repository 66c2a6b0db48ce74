//! `fasolve`: feedback arc and vertex set solvers on edge-list files.
//!
//! Exit codes: 0 on success, 1 on unreadable or malformed input, 2 when a
//! size or budget guard refuses the instance.

mod bench;
mod commands;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fasolve",
    version,
    about = "Exact and heuristic feedback arc/vertex set solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Instance file (`p fas` or `p fvs`); `-` reads stdin.
    file: PathBuf,
    /// Drop loop arcs instead of rejecting them; they are reported and
    /// added to every solution.
    #[arg(long)]
    strip_loops: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve exactly (or fall back to greedy with `auto`).
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
        method: SolveMethod,
        /// Largest global m the exact solvers accept.
        #[arg(long, default_value_t = 20)]
        m_budget: usize,
        /// Spanning-forest threshold for `--method hybrid`.
        #[arg(long, default_value_t = 0)]
        threshold: usize,
        /// Also print the graph as DOT with the solution highlighted.
        #[arg(long)]
        dot: bool,
    },
    /// Resolve: report resolvability, committed arcs and the resolved graph.
    Resolve {
        #[command(flatten)]
        input: Input,
    },
    /// Greedy heuristic with lower bounds.
    Greedy {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = EffectiveArg::Xi)]
        effective: EffectiveArg,
        /// Commit arcs by resolution before and between greedy cuts.
        #[arg(long)]
        resolve: bool,
    },
    /// Lower bounds μ, υ and the trivial upper bound.
    Bounds {
        #[command(flatten)]
        input: Input,
    },
    /// Cycle subgraphs, meta graphs and summary statistics.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Arc (1-based) whose cycle subgraph to emit.
        #[arg(long)]
        anchor: Option<usize>,
        #[arg(long, value_enum, default_value_t = KindArg::El)]
        kind: KindArg,
        /// Emit the meta graph of the elementary cycle given by `--seed`.
        #[arg(long, requires = "seed")]
        meta: bool,
        /// Comma-separated 1-based arc ids of an elementary cycle.
        #[arg(long, value_delimiter = ',')]
        seed: Vec<usize>,
    },
    /// Translate between problems, or emit the essential minor.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Target problem.
        #[arg(long, value_enum, conflicts_with = "minor")]
        to: Option<Problem>,
        /// Rim weights of the vertex gadgets (`--to fas`).
        #[arg(long, value_enum, default_value_t = RimArg::Heavy)]
        rims: RimArg,
        /// Emit the essential minor and its κ map.
        #[arg(long)]
        minor: bool,
        /// Where to write the κ map; default appends it to stdout.
        #[arg(long, requires = "minor")]
        kappa: Option<PathBuf>,
    },
    /// Brute-force optimum (small instances only).
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Print every optimal set.
        #[arg(long)]
        all: bool,
    },
    /// Run methods over a directory of instances and print a CSV table.
    Bench {
        dir: PathBuf,
        #[arg(long = "method", value_enum, default_values_t = [BenchMethod::CutResolve, BenchMethod::Greedy])]
        methods: Vec<BenchMethod>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave the timing column empty for byte-stable output.
        #[arg(long)]
        no_timing: bool,
    },
    /// Write the reference instances or a seeded random suite.
    Generate {
        /// Output directory.
        dir: PathBuf,
        /// Random instances instead of the reference fixtures.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Arc range for random instances, as `lo..=hi`.
        #[arg(long, default_value = "4..=12")]
        arcs: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolveMethod {
    Auto,
    Cut,
    CutResolve,
    Resolvable,
    Hybrid,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EffectiveArg {
    Xi,
    Eta,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    El,
    Si,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Problem {
    Fas,
    Fvs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RimArg {
    Heavy,
    Literal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMethod {
    Cut,
    CutResolve,
    Greedy,
    GreedyEta,
    Oracle,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use fasolve::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::TooLarge { .. } | Error::BudgetExceeded { .. } | Error::NotResolvable) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
