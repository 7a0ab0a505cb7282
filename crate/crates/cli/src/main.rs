use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use flatrank::bounds::BoundMethod;
use flatrank::linalg::{RankOptions, DEFAULT_PRIME};
use flatrank::pipeline::{BoundRequest, PolySource, RunOptions};

mod commands;
mod verify;

#[derive(Parser, Debug)]
#[command(name = "flatrank", version, about = "Border rank lower bounds from Koszul-Young flattenings")]
struct Cli {
    /// Prime for modular ranks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,

    /// Compute ranks over the rationals instead of modulo a prime.
    #[arg(long, global = true)]
    exact: bool,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached matrices.
    #[arg(long, global = true, env = "FLATRANK_CACHE", default_value = ".flatrank-cache")]
    cache_dir: PathBuf,

    /// Build every matrix from scratch and do not write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Seed for random primes in the multi-prime fallback.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Memory cap for elimination, in MiB.
    #[arg(long, global = true, default_value_t = 4096)]
    memory_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    KoszulFull,
    KoszulMinor,
    Pieri,
}

impl From<MethodArg> for BoundMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::KoszulFull => BoundMethod::KoszulFull,
            MethodArg::KoszulMinor => BoundMethod::KoszulMinor,
            MethodArg::Pieri => BoundMethod::Pieri,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Quick,
    Paper,
    Hwv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a flattening rank and the border rank bound it certifies.
    Bound {
        /// det, perm, power, or file:<path> with a polynomial in JSON.
        #[arg(long, default_value = "det")]
        poly: String,
        #[arg(long)]
        n: usize,
        /// Defaults to pieri for n = 3 and koszul-minor otherwise.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
    },
    /// List the irreducible modules allowed in the image of the minor flattening.
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
    /// Run a regression suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Quick)]
        suite: Suite,
        /// Regression baseline (JSON); the bundled one is used by default.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub run: RunOptions,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.threads == Some(0) {
            bail!("--threads must be at least 1");
        }
        if cli.memory_cap < 256 {
            bail!("--memory-cap must be at least 256 MiB");
        }
        Ok(RunConfig {
            format: cli.format,
            run: RunOptions {
                prime: Some(cli.prime),
                exact: cli.exact,
                cache_dir: (!cli.no_cache).then(|| cli.cache_dir.clone()),
                rank: RankOptions {
                    memory_cap_bytes: cli.memory_cap << 20,
                    seed: cli.seed,
                    ..RankOptions::default()
                },
            },
        })
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config = RunConfig::from_cli(&cli)?;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Bound { poly, n, method, d, p } => {
            let source: PolySource = poly.parse()?;
            let method = method.map(BoundMethod::from).unwrap_or(if n == 3 {
                BoundMethod::Pieri
            } else {
                BoundMethod::KoszulMinor
            });
            let req = BoundRequest { poly: source, n, method, d, p };
            commands::bound(&req, &config)?;
            Ok(true)
        }
        Command::Decompose { n, d, p } => {
            commands::decompose(n, d, p, &config)?;
            Ok(true)
        }
        Command::Verify { suite, baseline } => verify::run(suite, baseline.as_deref(), &config),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
