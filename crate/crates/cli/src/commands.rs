//! The clean / inject / evaluate / bench workflows.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use speedclean::adaptive::{self, AdaptiveParams, ConstraintChange};
use speedclean::quality::{self, ErrorPattern, ErrorSpec};
use speedclean::{cluster, global, streaming};
use speedclean::{RepairResult, SpeedConstraint, TimeSeries};

use crate::csvio::{format_value, read_series, write_series};
use crate::error::CliError;
use crate::report::{EvalReport, CSV_HEADER};
use crate::synth;

#[derive(Parser, Debug)]
#[command(
    name = "speedclean",
    version,
    about = "Repair errors in multivariate time series under speed constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Repair a series file and write the repaired series.
    Clean(CleanArgs),
    /// Corrupt a clean series with seeded synthetic errors.
    Inject(InjectArgs),
    /// Score a repaired series against truth and the dirty input.
    Evaluate(EvaluateArgs),
    /// Time every cleaner on seeded synthetic series of growing sizes.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Batch minimum-fix repair (quadratic, smallest repair count).
    Global,
    /// Online repair against the last fixed point (linear).
    Local,
    /// Online repair toward the dominant window cluster.
    Cluster,
    /// Cluster repair with a self-tuning speed bound.
    Adaptive,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Global => "global",
            Algorithm::Local => "local",
            Algorithm::Cluster => "cluster",
            Algorithm::Adaptive => "adaptive",
        }
    }
}

/// Constraint and adaptive hyper-parameters shared by clean and bench.
#[derive(Args, Debug, Clone)]
pub struct ConstraintArgs {
    /// Maximum speed (distance units per second).
    #[arg(long)]
    pub speed: f64,
    /// Constraint window in seconds.
    #[arg(long)]
    pub window: f64,
    /// Adaptive: histogram buckets (incl. overflow).
    #[arg(long, default_value_t = 6)]
    pub buckets: usize,
    /// Adaptive: KL divergence threshold.
    #[arg(long, default_value_t = 0.75)]
    pub tau: f64,
    /// Adaptive: speeds per monitoring window.
    #[arg(long, default_value_t = 150)]
    pub interval: usize,
    /// Adaptive: modify factor dividing the 95th-percentile speed.
    #[arg(long, default_value_t = 0.75)]
    pub beta: f64,
}

impl ConstraintArgs {
    pub fn constraint(&self) -> Result<SpeedConstraint, CliError> {
        SpeedConstraint::new(self.speed, self.window).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn adaptive_params(&self) -> Result<AdaptiveParams, CliError> {
        AdaptiveParams::new(self.buckets, self.tau, self.interval, self.beta)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
pub struct CleanArgs {
    /// Input series file.
    #[arg(long)]
    pub input: PathBuf,
    /// Repaired series file to write.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
    /// Adaptive only: also write the (timestamp, s_max) constraint trace.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InjectArgs {
    /// Clean input series file.
    #[arg(long)]
    pub input: PathBuf,
    /// Corrupted series file to write.
    #[arg(long)]
    pub output: PathBuf,
    /// File listing the corrupted (index, dimension) pairs.
    #[arg(long)]
    pub error_index: PathBuf,
    /// Fraction of points to corrupt, in [0, 1].
    #[arg(long)]
    pub error_rate: f64,
    #[arg(long, value_enum, default_value_t = PatternArg::Together)]
    pub pattern: PatternArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternArg {
    Together,
    Separate,
}

impl PatternArg {
    pub fn name(&self) -> &'static str {
        match self {
            PatternArg::Together => "together",
            PatternArg::Separate => "separate",
        }
    }

    fn to_core(self) -> ErrorPattern {
        match self {
            PatternArg::Together => ErrorPattern::Together,
            PatternArg::Separate => ErrorPattern::Separate,
        }
    }
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Ground-truth series file.
    #[arg(long)]
    pub truth: PathBuf,
    /// Corrupted series file (the cleaner's input).
    #[arg(long)]
    pub dirty: PathBuf,
    /// Repaired series file (the cleaner's output).
    #[arg(long)]
    pub repaired: PathBuf,
    /// Append the report as a CSV row to this file (header written once).
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Metadata recorded in the CSV row.
    #[arg(long, default_value = "unknown")]
    pub algorithm: String,
    #[arg(long, default_value_t = 0.0)]
    pub error_rate: f64,
    #[arg(long, default_value = "unknown")]
    pub pattern: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repair wall time from a prior `clean` run, for the CSV row.
    #[arg(long, default_value_t = 0.0)]
    pub elapsed_ms: f64,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated series sizes; empty for an empty table.
    #[arg(long, default_value = "10000,50000,100000")]
    pub sizes: String,
    /// Algorithms to time.
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [Algorithm::Global, Algorithm::Local, Algorithm::Cluster, Algorithm::Adaptive])]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    pub dimension: usize,
    #[arg(long, default_value_t = 0.1)]
    pub error_rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub constraint: BenchConstraintArgs,
}

/// Like [`ConstraintArgs`] but with defaults matched to the synthetic walk.
#[derive(Args, Debug, Clone)]
pub struct BenchConstraintArgs {
    #[arg(long, default_value_t = 1.2)]
    pub speed: f64,
    #[arg(long, default_value_t = 5.0)]
    pub window: f64,
    #[arg(long, default_value_t = 6)]
    pub buckets: usize,
    #[arg(long, default_value_t = 0.75)]
    pub tau: f64,
    #[arg(long, default_value_t = 150)]
    pub interval: usize,
    #[arg(long, default_value_t = 0.75)]
    pub beta: f64,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Clean(args) => cmd_clean(&args),
        Command::Inject(args) => cmd_inject(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Bench(args) => cmd_bench(&args),
    }
}

/// Run one algorithm; for adaptive also return the constraint trace.
pub fn run_algorithm(
    algorithm: Algorithm,
    ts: &TimeSeries,
    constraint: &SpeedConstraint,
    params: &AdaptiveParams,
) -> Result<(RepairResult, Vec<ConstraintChange>), CliError> {
    match algorithm {
        Algorithm::Global => Ok((global::clean(ts, constraint), Vec::new())),
        Algorithm::Local => Ok((streaming::clean(ts, constraint), Vec::new())),
        Algorithm::Cluster => Ok((cluster::clean(ts, constraint), Vec::new())),
        Algorithm::Adaptive => adaptive::clean_traced(ts, *constraint, *params)
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn cmd_clean(args: &CleanArgs) -> Result<(), CliError> {
    let constraint = args.constraint.constraint()?;
    let params = args.constraint.adaptive_params()?;
    let ts = read_series(&args.input)?;

    let (result, trace) = run_algorithm(args.algorithm, &ts, &constraint, &params)?;
    write_series(&args.output, &result.repaired)?;

    if let Some(trace_path) = &args.trace_out {
        let mut text = String::from("timestamp,s_max\n");
        for change in &trace {
            text.push_str(&format!(
                "{},{}\n",
                format_value(change.timestamp),
                format_value(change.s_max)
            ));
        }
        fs::write(trace_path, text)?;
    }

    println!("algorithm: {}", args.algorithm.name());
    println!("points: {}", result.repaired.len());
    println!("repair_count: {}", result.repair_count);
    println!("repair_distance: {}", format_value(result.repair_distance));
    println!("elapsed_ms: {:.3}", result.elapsed.as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_inject(args: &InjectArgs) -> Result<(), CliError> {
    let truth = read_series(&args.input)?;
    let spec = ErrorSpec::new(args.error_rate, args.pattern.to_core(), args.seed);
    let injection =
        quality::inject_errors(&truth, &spec).map_err(|e| CliError::Usage(e.to_string()))?;

    write_series(&args.output, &injection.dirty)?;
    let mut index_text = String::from("index,dimension\n");
    for (i, d) in &injection.injected {
        index_text.push_str(&format!("{i},{d}\n"));
    }
    fs::write(&args.error_index, index_text)?;

    println!("points: {}", truth.len());
    println!("injected_cells: {}", injection.injected.len());
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let truth = read_series(&args.truth)?;
    let dirty = read_series(&args.dirty)?;
    let repaired = read_series(&args.repaired)?;
    check_aligned(&truth, &dirty, &args.truth, &args.dirty)?;
    check_aligned(&truth, &repaired, &args.truth, &args.repaired)?;

    let metrics = |e: speedclean::Error| CliError::Internal(e.to_string());
    let (repair_count, repair_number) =
        quality::repair_number(&repaired, &dirty).map_err(metrics)?;
    let report = EvalReport {
        algorithm: args.algorithm.clone(),
        n: truth.len(),
        dimension: truth.dimension(),
        error_rate: args.error_rate,
        pattern: args.pattern.clone(),
        seed: args.seed,
        rmse_dirty: quality::rmse(&dirty, &truth).map_err(metrics)?,
        rmse_repaired: quality::rmse(&repaired, &truth).map_err(metrics)?,
        repair_distance: quality::repair_distance(&repaired, &dirty).map_err(metrics)?,
        repair_number,
        repair_count,
        elapsed_ms: args.elapsed_ms,
    };

    print!("{}", report.to_text());
    if let Some(csv_path) = &args.csv_out {
        append_csv_row(csv_path, &report)?;
    }
    Ok(())
}

fn check_aligned(
    a: &TimeSeries,
    b: &TimeSeries,
    a_path: &Path,
    b_path: &Path,
) -> Result<(), CliError> {
    let misaligned = a.len() != b.len()
        || a.dimension() != b.dimension()
        || a.iter()
            .zip(b.iter())
            .any(|(x, y)| x.timestamp != y.timestamp);
    if misaligned {
        return Err(CliError::Usage(format!(
            "{} and {} are not aligned (length, dimension, and timestamps must match)",
            a_path.display(),
            b_path.display()
        )));
    }
    Ok(())
}

fn append_csv_row(path: &Path, report: &EvalReport) -> Result<(), CliError> {
    let mut text = if path.exists() {
        fs::read_to_string(path)?
    } else {
        format!("{CSV_HEADER}\n")
    };
    text.push_str(&report.to_csv_row());
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let constraint = SpeedConstraint::new(args.constraint.speed, args.constraint.window)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let params = AdaptiveParams::new(
        args.constraint.buckets,
        args.constraint.tau,
        args.constraint.interval,
        args.constraint.beta,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    if args.dimension == 0 {
        return Err(CliError::Usage("dimension must be at least 1".into()));
    }
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("invalid size `{s}`")))
        })
        .collect::<Result<_, _>>()?;

    println!("algorithm,n,dimension,elapsed_ms");
    for &n in &sizes {
        if n == 0 {
            continue;
        }
        let truth = synth::bounded_walk(n, args.dimension, args.seed, 1.0, 100.0);
        let spec = ErrorSpec::new(args.error_rate, ErrorPattern::Together, args.seed);
        let dirty = quality::inject_errors(&truth, &spec)
            .map_err(|e| CliError::Usage(e.to_string()))?
            .dirty;
        for &algorithm in &args.algorithms {
            let start = Instant::now();
            let (result, _) = run_algorithm(algorithm, &dirty, &constraint, &params)?;
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            debug_assert_eq!(result.repaired.len(), n);
            println!(
                "{},{},{},{:.3}",
                algorithm.name(),
                n,
                args.dimension,
                elapsed_ms
            );
        }
    }
    Ok(())
}
