//! `patrol`: decompose trees, build strategies, evaluate them and factorize
//! complete networks. Every run echoes a manifest to stderr.
//!
//! Exit codes: 0 success, 1 validation error, 2 usage error, 3 size guard.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use patrol_core::rational::parse_rational;
use patrol_core::Rational;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}{source}")]
    Core { context: String, source: patrol_core::Error },
}

impl From<patrol_core::Error> for CliError {
    fn from(source: patrol_core::Error) -> Self {
        CliError::Core { context: String::new(), source }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core { source: patrol_core::Error::SizeGuard(_), .. } => 3,
            CliError::Core { .. } => 1,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

#[derive(Parser, Debug)]
#[command(name = "patrol", version, about = "Patrolling games on metric networks")]
struct Cli {
    /// Seed for every random choice (Monte Carlo trials).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PatrolKind {
    /// E-patrolling on a tree.
    E,
    /// Eulerian tours of complements of a 1-factorization.
    Complete,
    /// Eulerian tours of complements of an m-factorization.
    Factor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EvalMethod {
    Exact,
    Mc,
    /// Attacker best response over a point and time grid.
    Grid,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extremity set, core and subtree decomposition of a tree.
    Decompose {
        network: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[command(flatten)]
        out: Output,
    },
    /// Tree attack strategy.
    Attack {
        network: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        /// Start-time horizon; defaults to 3 alpha / epsilon.
        #[arg(long, value_parser = rational_arg, conflicts_with = "epsilon")]
        horizon: Option<Rational>,
        /// Optimality slack used to derive the horizon (default 1/20).
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        #[command(flatten)]
        out: Output,
    },
    /// Patroller strategy.
    Patrol {
        network: PathBuf,
        #[arg(long, value_enum)]
        kind: PatrolKind,
        /// Attack duration (needed for `e`).
        #[arg(long, value_parser = rational_arg)]
        alpha: Option<Rational>,
        /// Factorization file; `complete` falls back to round robin.
        #[arg(long, value_name = "FILE")]
        factorization: Option<PathBuf>,
        /// Regularity of the factors in the factorization file.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// For `complete`: use a factorization minimizing the longest factor.
        #[arg(long)]
        best: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Interception probability of a patrol against an attack.
    Simulate {
        network: PathBuf,
        #[arg(long, value_name = "FILE")]
        patrol: PathBuf,
        /// Attack file (ignored by `--method grid`, which searches instead).
        #[arg(long, value_name = "FILE")]
        attack: Option<PathBuf>,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long, value_enum, default_value = "exact")]
        method: EvalMethod,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Grid spacing along arcs and in time.
        #[arg(long, value_parser = rational_arg, default_value = "1/8")]
        grid_step: Rational,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate or optimize 1-factorizations of a complete network.
    Factorize {
        network: PathBuf,
        #[arg(long, conflicts_with = "best", required_unless_present = "best")]
        enumerate: bool,
        #[arg(long)]
        best: bool,
        /// With `--best`, allow the swap heuristic above 8 nodes.
        #[arg(long, requires = "best")]
        heuristic: bool,
        /// With `--enumerate`, write every factorization into this directory.
        #[arg(long, value_name = "DIR", requires = "enumerate")]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
