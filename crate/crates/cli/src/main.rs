mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leadlag_core::{ErrorKind, Family, PriceScale};

/// Scale-by-scale lead-lag estimation with MODWT wavelet cross-covariances.
///
/// Times are in seconds; lags on the command line are in grid units (multiples of tau)
/// unless a flag says otherwise.
#[derive(Debug, Parser)]
#[command(name = "leadlag", version)]
struct Cli {
    /// Worker threads (default: all cores). LEADLAG_THREADS overrides this flag.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the level-j squared gain H_{j,L} against the cascade filter's DFT.
    Gain(GainArgs),
    /// Draw one path from a model file and write increments and missingness flags.
    Simulate(SimulateArgs),
    /// Estimate the lead-lag at each wavelet level from two tick files.
    Estimate(EstimateArgs),
    /// Run the Monte Carlo experiment and write the median/MAD table.
    Mc(McArgs),
    /// Check a model file for admissibility and embedding feasibility.
    ModelCheck(ModelCheckArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Haar,
    La8,
    La20,
}

impl From<FamilyArg> for Family {
    fn from(value: FamilyArg) -> Self {
        match value {
            FamilyArg::Haar => Family::Haar,
            FamilyArg::La8 => Family::La8,
            FamilyArg::La20 => Family::La20,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScaleArg {
    /// Positive prices; the log is taken on alignment.
    Raw,
    /// Values are log-prices already.
    Log,
}

impl From<ScaleArg> for PriceScale {
    fn from(value: ScaleArg) -> Self {
        match value {
            ScaleArg::Raw => PriceScale::RawPrice,
            ScaleArg::Log => PriceScale::LogPrice,
        }
    }
}

#[derive(Debug, Args)]
struct GainArgs {
    /// Wavelet filter family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Wavelet level j (>= 1).
    #[arg(long)]
    level: usize,
    /// Number of frequencies, evenly spaced over [0, pi] radians per sample.
    #[arg(long, default_value_t = 1024)]
    points: usize,
    /// Output CSV (columns: schema_version, lambda, H_jL, empirical). Stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Model JSON: {J, tau?, levels: [{j, R, theta_over_tau | theta_seconds}], pi1, pi2, n}.
    #[arg(long)]
    model: PathBuf,
    /// Seed for the path and the missingness masks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV with one row per grid point k: schema_version, k, t_seconds, r1, r2, miss1, miss2.
    /// r is the increment over [k tau, (k+1) tau]; miss flags refer to grid point k.
    #[arg(long)]
    out: PathBuf,
    /// Also write the observed ticks of series 1 as a timestamp,price CSV (seconds, raw price).
    #[arg(long, requires = "ticks2")]
    ticks1: Option<PathBuf>,
    /// Same for series 2.
    #[arg(long, requires = "ticks1")]
    ticks2: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Tick CSV of the first series: timestamp (seconds), price.
    #[arg(long)]
    in1: PathBuf,
    /// Tick CSV of the second series.
    #[arg(long)]
    in2: PathBuf,
    /// Wavelet filter family.
    #[arg(long, value_enum, default_value = "la20")]
    family: FamilyArg,
    /// Highest wavelet level; levels 1..=LEVELS are estimated.
    #[arg(long, default_value_t = 8)]
    levels: usize,
    /// Lag grid half-width in grid units: lags -MAXLAG..=MAXLAG.
    #[arg(long, default_value_t = 60)]
    maxlag: usize,
    /// Grid spacing tau in seconds.
    #[arg(long)]
    tau: f64,
    /// Grid origin in seconds (default: the later of the two first timestamps).
    #[arg(long)]
    t0: Option<f64>,
    /// Number of grid increments (default: as many as both series cover).
    #[arg(long)]
    n: Option<usize>,
    /// How to read the price column.
    #[arg(long, value_enum, default_value = "raw")]
    scale: ScaleArg,
    /// Output JSON report. Estimated lags are reported in seconds (theta_hat_seconds)
    /// and grid units (lag_steps); a positive lag means series 1 leads (its returns
    /// correlate with later returns of series 2).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct McArgs {
    /// Experiment JSON: {model: <model file>, families?, levels?, maxlag?, reps?, seed?}.
    /// Without it the built-in reference design (n = 15000, |l| <= 60, levels 1..8) is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Missing probability for both series with the built-in design.
    #[arg(long, default_value_t = 0.0, conflicts_with = "config")]
    pi: f64,
    /// Replications (overrides the config file).
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV: rows (estimator, statistic), columns j1..jJ, lags in grid units.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON dump of every replication's estimates.
    #[arg(long)]
    runs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelCheckArgs {
    /// Model JSON file to check (tau and theta_seconds in seconds, theta_over_tau in grid units).
    #[arg(long)]
    model: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Core(leadlag_core::Error),
}

impl From<leadlag_core::Error> for CliError {
    fn from(value: leadlag_core::Error) -> Self {
        CliError::Core(value)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(message) | CliError::Data(message) => write!(f, "{message}"),
            CliError::Core(err) => write!(f, "{err}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Core(err) => match err.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numeric => 3,
            },
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), CliError> {
    let threads = match std::env::var("LEADLAG_THREADS") {
        Ok(value) => Some(value.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("LEADLAG_THREADS must be a positive integer, got {value:?}"))
        })?),
        Err(_) => flag,
    };
    if let Some(threads) = threads {
        if threads == 0 {
            return Err(CliError::Usage("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads(cli.threads).and_then(|()| match cli.command {
        Command::Gain(args) => commands::gain(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Estimate(args) => commands::estimate(args),
        Command::Mc(args) => commands::mc(args),
        Command::ModelCheck(args) => commands::model_check(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
