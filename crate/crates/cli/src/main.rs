mod commands;
mod error;
mod grid;
mod model;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use model::ModelArgs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Friendship-bias experiments on sparse random graphs and their local limits.
#[derive(Parser, Debug)]
#[command(name = "fbl", version)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads. Never changes the numbers produced.
    #[arg(long, global = true, env = "FBL_THREADS")]
    threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one graph and print its edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of vertices.
        #[arg(long, short)]
        n: usize,
    },
    /// Per-vertex friendship bias of a graph read from a file or sampled.
    Bias {
        /// Edge-list file (`# n=<n>` header, then `u v` per line).
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, short)]
        n: Option<usize>,
    },
    /// Monte Carlo summary of the root bias in the limiting tree.
    LimitSample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Print every draw as `d_phi,delta` instead of the summary.
        #[arg(long, conflicts_with = "fit_x_min")]
        raw: bool,
        /// Fit a power law to the bias tail above this point instead.
        #[arg(long)]
        fit_x_min: Option<f64>,
    },
    /// Closed forms and certified series.
    Analytic(commands::AnalyticArgs),
    /// Graph-side against tree-side statistics for one model.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, short, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        replicates: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Graph sizes for a convergence table, e.g. `1000,10000,100000`.
        #[arg(long)]
        n_grid: Option<String>,
    },
    /// One quantity over a parameter grid.
    Sweep(commands::SweepArgs),
    /// `P{X_1 + ... + X_{X_0} >= X_0(X_0 - 1)}` for i.i.d. `X_i`.
    Conjecture {
        /// Offspring law, e.g. `poisson:2` or `twopoint:1:0.2:20:0.8`.
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn dispatch(cli: &Cli) -> Result<output::Emit, CliError> {
    let seed = cli.common.seed;
    match &cli.command {
        Command::Generate { model, n } => commands::generate(&model.resolve()?, *n, seed),
        Command::Bias { input, model, n } => commands::bias(input.as_deref(), model, *n, seed),
        Command::LimitSample {
            model,
            samples,
            raw,
            fit_x_min,
        } => commands::limit_sample(&model.resolve()?, *samples, *raw, *fit_x_min, seed),
        Command::Analytic(args) => commands::analytic(args, seed),
        Command::Compare {
            model,
            n,
            replicates,
            samples,
            n_grid,
        } => commands::compare(&model.resolve()?, *n, *replicates, *samples, n_grid.as_deref(), seed),
        Command::Sweep(args) => commands::sweep(args, seed),
        Command::Conjecture { dist, tol } => commands::conjecture(dist, *tol),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let emit = dispatch(cli)?;
    let text = match cli.common.format {
        Format::Csv => emit.csv,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&emit.json)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &cli.common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fbl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
