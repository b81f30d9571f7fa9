use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use udd_cli::cache::Cache;
use udd_cli::commands::{self, Command};
use udd_cli::config::{Kind, RunConfig, Units};

#[derive(Parser, Debug)]
#[command(
    name = "udd",
    version,
    about = "Qubit coherence and entanglement under pi-pulse sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// |f(w)|^2 on a frequency grid, exact and closed form.
    Filter(RunArgs),
    /// Signal S against time for every (alpha, kind, n).
    Signal(RunArgs),
    /// Two-qubit concurrence against time.
    Concurrence(RunArgs),
    /// Concurrence death times, sequence kinds side by side.
    Death(RunArgs),
    /// GHZ coherence prefactor S^(N/2) against time.
    Ghz(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Config file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Bath couplings, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Pulse counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Sequence kinds, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    kind: Option<Vec<Kind>>,
    /// End of the time grid; the scan horizon for `death`, the sequence
    /// duration for `filter`.
    #[arg(long)]
    tmax: Option<f64>,
    /// Grid points (frequency points for `filter`).
    #[arg(long)]
    points: Option<usize>,
    /// Bath temperature.
    #[arg(long)]
    theta: Option<f64>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<String>,
    /// Read and write times in seconds and frequencies in rad/s.
    #[arg(long)]
    si: bool,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Print the effective config and exit.
    #[arg(long)]
    dump_config: bool,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    match s {
        "uniform" => Ok(Kind::Uniform),
        "uhrig" => Ok(Kind::Uhrig),
        "custom" => Ok(Kind::Custom),
        _ => Err(format!("expected uniform, uhrig or custom, got {s:?}")),
    }
}

fn effective_config(command: Command, args: &RunArgs) -> anyhow::Result<RunConfig> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(alpha) = &args.alpha {
        config.bath.alpha = alpha.clone();
    }
    if let Some(n) = &args.n {
        config.sequence.n = n.clone();
    }
    if let Some(kinds) = &args.kind {
        config.sequence.kinds = kinds.clone();
    }
    if let Some(tmax) = args.tmax {
        match command {
            Command::Filter => config.filter.total = tmax,
            Command::Death => config.death.horizon = tmax,
            _ => config.grid.stop = tmax,
        }
    }
    if let Some(points) = args.points {
        match command {
            Command::Filter => config.filter.points = points,
            _ => config.grid.points = points,
        }
    }
    if let Some(theta) = args.theta {
        config.bath.theta = theta;
    }
    if let Some(out) = &args.out {
        config.output.path = Some(out.clone());
    }
    if args.si {
        config.units = Units::Si;
    }
    if let Err(found) = config.validate() {
        bail!(
            "{} (after command-line overrides): [{}] {}: {}",
            args.config.display(),
            found.section,
            found.key,
            found.message
        );
    }
    Ok(config)
}

fn run(command: Command, args: &RunArgs) -> anyhow::Result<bool> {
    let config = effective_config(command, args)?;
    if args.dump_config {
        print!("{}", config.to_toml());
        return Ok(true);
    }
    let pool = match args.jobs {
        Some(0) => bail!("--jobs must be >= 1"),
        Some(jobs) => rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?,
        None => rayon::ThreadPoolBuilder::new().build()?,
    };
    let cache = Cache::from_env();
    let report = pool
        .install(|| commands::run(command, &config, cache.as_ref()))
        .map_err(anyhow::Error::msg)?;
    let bytes = report.table.to_bytes();
    match &config.output.path {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {path}"))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    for failure in &report.failures {
        eprintln!("udd: cell failed: {failure}");
    }
    Ok(report.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Filter(a) => (Command::Filter, a),
        Sub::Signal(a) => (Command::Signal, a),
        Sub::Concurrence(a) => (Command::Concurrence, a),
        Sub::Death(a) => (Command::Death, a),
        Sub::Ghz(a) => (Command::Ghz, a),
    };
    match run(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("udd: {e:#}");
            ExitCode::from(2)
        }
    }
}
