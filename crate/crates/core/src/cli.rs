//! Command-line front end. [`run`] is the whole program minus process setup,
//! so it can be driven in-process by tests.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::engine::{compare_runs, parse_snapshot_csv, ps_minobs, snapshots_to_csv, RunConfig};
use crate::error::Error;
use crate::io::{parse_dataset, parse_score_file, write_dag, write_score_file, DatasetOptions};
use crate::sampler::{required_m, SamplingConfig};
use crate::scoring::{build_score_table, count_dags, max_cps_count, significant_figures, ScoringConfig};
use crate::search::{local_search_with_restarts, minobs_search, Budget, Deadline, LocalSearch, SearchConfig, Snapshot};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// Environment variable holding the default worker thread count.
pub const THREADS_ENV: &str = "PSMINOBS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "psminobs", version, about = "Bayesian network structure learning over candidate parent sets")]
pub struct Cli {
    /// Config file of `key = value` lines; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every candidate parent set of a dataset and write a score file
    Score(ScoreArgs),
    /// Learn a DAG from a score file
    Learn(LearnArgs),
    /// Per-interval relative discrepancy between a baseline and a run
    Compare(CompareArgs),
    /// Counting utilities
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Dataset file: whitespace-separated integer codes, optional names and arity header lines
    pub data: PathBuf,
    /// Maximum parent set size [default: 3]
    #[arg(long, short = 'd')]
    pub max_indegree: Option<usize>,
    /// Equivalent sample size [default: 1]
    #[arg(long)]
    pub ess: Option<f64>,
    /// Keep dominated parent sets
    #[arg(long)]
    pub no_prune: bool,
    /// Refuse nodes with more candidate parent sets than this [default: 100000000]
    #[arg(long)]
    pub cap: Option<u128>,
    /// Output score file; standard output when omitted
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Obs,
    Inobs,
    Minobs,
    PsMinobs,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    /// Score file
    pub scores: PathBuf,
    /// Search algorithm [default: ps-minobs]
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// Sampling rate in (0, 1], ps-minobs only [default: 0.1]
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of sampled subproblems, ps-minobs only [default: 10]
    #[arg(long)]
    pub m: Option<usize>,
    /// Wall-clock budget in seconds [default: 60]
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Step budget; replaces the wall-clock budget and makes runs reproducible
    #[arg(long, conflicts_with = "time_limit")]
    pub iterations: Option<u64>,
    /// Base random seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Concurrent workers [default: $PSMINOBS_THREADS, else m]
    #[arg(long)]
    pub threads: Option<usize>,
    /// Snapshot spacing in budget units [default: min(1800, budget)]
    #[arg(long)]
    pub snapshot_interval: Option<f64>,
    /// Memetic population size [default: 20]
    #[arg(long)]
    pub population: Option<usize>,
    /// Per-position mutation rate [default: 0.1]
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    /// Output DAG file; standard output when omitted
    #[arg(long)]
    pub out_dag: Option<PathBuf>,
    /// Output snapshot CSV
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Baseline snapshot CSV (worker,elapsed_s,score)
    pub baseline: PathBuf,
    /// Run snapshot CSV (worker,elapsed_s,score)
    pub run: PathBuf,
    /// Interval between comparison points [default: 1800]
    #[arg(long)]
    pub interval: Option<f64>,
    /// Output CSV; standard output when omitted
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    /// Also print a table with permille values
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InfoArgs {
    /// Candidate parent sets over all nodes for N variables at in-degree D
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    pub cps: Option<Vec<u64>>,
    /// Number of labelled DAGs on N nodes
    #[arg(long, value_name = "N")]
    pub dags: Option<u64>,
    /// Subsets needed to match the full combination count at rate P over N nodes
    #[arg(long, num_args = 2, value_names = ["P", "N"])]
    pub required_m: Option<Vec<String>>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CombinatorialCap { .. } | Error::ScoreOverflow { .. } => EXIT_CAP,
            Error::InvalidConfig(_)
            | Error::InvalidEss(_)
            | Error::InvalidIndegree { .. }
            | Error::IntervalTooLarge { .. }
            | Error::ZeroReference => EXIT_USAGE,
            _ => EXIT_PARSE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// `key = value` settings; keys are normalised to snake case.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &[
    "max_indegree",
    "ess",
    "prune",
    "cap",
    "algo",
    "p",
    "m",
    "time_limit",
    "iterations",
    "seed",
    "threads",
    "snapshot_interval",
    "population",
    "mutation_rate",
    "interval",
];

impl ConfigFile {
    pub fn parse(text: &str) -> crate::error::Result<Self> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, format!("expected key = value, got {line:?}")))?;
            let key = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::parse(i + 1, format!("unknown key {key:?}")));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse().map_err(|_| Failure {
                    code: EXIT_PARSE,
                    message: format!("config value {key} = {v:?} is invalid"),
                })
            })
            .transpose()
    }
}

fn pick<T: std::str::FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| Failure::from(Error::Io { path: path.to_path_buf(), source }))
}

fn check_output(path: &Option<PathBuf>) -> CliResult<()> {
    if let Some(p) = path {
        let dir = match p.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        if !dir.is_dir() {
            return Err(Failure::usage(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io_err = |source: std::io::Error| Failure::from(Error::Io { path: path.to_path_buf(), source });
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn emit(path: &Option<PathBuf>, contents: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let _ = out.write_all(contents.as_bytes());
            Ok(())
        }
    }
}

fn cmd_score(args: &ScoreArgs, cfg: &ConfigFile, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    check_output(&args.out)?;
    let defaults = ScoringConfig::default();
    let prune = if args.no_prune { false } else { cfg.get("prune")?.unwrap_or(true) };
    let scoring = ScoringConfig {
        max_indegree: pick(args.max_indegree, cfg, "max_indegree")?.unwrap_or(defaults.max_indegree),
        ess: pick(args.ess, cfg, "ess")?.unwrap_or(defaults.ess),
        prune,
        enumeration_cap: pick(args.cap, cfg, "cap")?.unwrap_or(defaults.enumeration_cap),
    };
    let data = parse_dataset(&read_input(&args.data)?, DatasetOptions::default())?;
    let table = build_score_table(&data, &scoring)?;
    emit(&args.out, &write_score_file(&table), out)?;
    for (t, name) in table.tables().iter().zip(table.names()) {
        let _ = writeln!(err, "{name}: {} parent sets", t.len());
    }
    let _ = writeln!(err, "total: {}", table.total_entries());
    Ok(())
}

fn default_threads(flag: Option<usize>, cfg: &ConfigFile) -> CliResult<Option<usize>> {
    if let Some(t) = pick(flag, cfg, "threads")? {
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            v.trim().parse().map(Some).map_err(|_| Failure::usage(format!("{THREADS_ENV}={v:?} is not a thread count")))
        }
        Err(_) => Ok(None),
    }
}

fn cmd_learn(
    args: &LearnArgs,
    cfg: &ConfigFile,
    cancel: Option<Arc<AtomicBool>>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let algo = match args.algo {
        Some(a) => a,
        None => match cfg.values.get("algo") {
            Some(v) => Algo::from_str(v, true)
                .map_err(|_| Failure { code: EXIT_PARSE, message: format!("config value algo = {v:?} is invalid") })?,
            None => Algo::PsMinobs,
        },
    };
    if algo != Algo::PsMinobs && (args.p.is_some() || args.m.is_some()) {
        return Err(Failure::usage("--p and --m apply only to --algo ps-minobs"));
    }
    check_output(&args.out_dag)?;
    check_output(&args.out_csv)?;

    let budget = match pick(args.iterations, cfg, "iterations")? {
        Some(n) if args.time_limit.is_none() => Budget::Steps(n),
        _ => {
            let t: f64 = pick(args.time_limit, cfg, "time_limit")?.unwrap_or(60.0);
            if !(t > 0.0 && t.is_finite()) {
                return Err(Failure::usage("--time-limit must be positive"));
            }
            Budget::seconds(t)
        }
    };
    if budget == Budget::Steps(0) {
        return Err(Failure::usage("--iterations must be positive"));
    }
    let interval = match pick(args.snapshot_interval, cfg, "snapshot_interval")? {
        Some(i) => i,
        None => 1800f64.min(budget.limit()),
    };
    let defaults = SearchConfig::default();
    let search = SearchConfig {
        population_size: pick(args.population, cfg, "population")?.unwrap_or(defaults.population_size),
        mutation_rate: pick(args.mutation_rate, cfg, "mutation_rate")?.unwrap_or(defaults.mutation_rate),
        rng_seed: pick(args.seed, cfg, "seed")?.unwrap_or(0),
        snapshot_interval: interval,
        ..defaults
    };
    search.validate()?;
    if interval > budget.limit() {
        return Err(Failure::usage(format!("snapshot interval {interval} exceeds the budget {}", budget.limit())));
    }

    let table = parse_score_file(&read_input(&args.scores)?)?;
    let started = Instant::now();
    let (dag, snapshots) = if algo == Algo::PsMinobs {
        let p = pick(args.p, cfg, "p")?;
        let m = pick(args.m, cfg, "m")?.unwrap_or(10);
        let run = RunConfig {
            sampling: SamplingConfig::new(p.unwrap_or(0.1))?,
            m,
            budget,
            snapshot_interval: interval,
            base_seed: search.rng_seed,
            threads: default_threads(args.threads, cfg)?.unwrap_or(m),
            search,
            cancel,
        };
        let report = ps_minobs(&table, &run)?;
        let _ = write!(err, "{}", report.summary());
        let snaps = report.all_snapshots();
        (report.dag, snaps)
    } else {
        let mut deadline = Deadline::new(budget);
        if let Some(flag) = cancel {
            deadline = deadline.with_cancel(flag);
        }
        let mut snaps: Vec<Snapshot> = Vec::new();
        let mut sink = |s: Snapshot| snaps.push(s);
        let eval = match algo {
            Algo::Minobs => minobs_search(&table, &search, &deadline, &mut sink)?,
            Algo::Obs => local_search_with_restarts(LocalSearch::Obs, &table, &search, &deadline, &mut sink),
            _ => local_search_with_restarts(LocalSearch::Inobs, &table, &search, &deadline, &mut sink),
        };
        (eval.to_dag(), snaps)
    };
    let _ = writeln!(err, "final score {:?}", dag.score);
    let _ = writeln!(err, "elapsed {:.3}s", started.elapsed().as_secs_f64());
    emit(&args.out_dag, &write_dag(&dag, table.names()), out)?;
    if let Some(p) = &args.out_csv {
        write_atomic(p, &snapshots_to_csv(&snapshots))?;
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs, cfg: &ConfigFile, out: &mut dyn Write) -> CliResult<()> {
    check_output(&args.out)?;
    let interval: f64 = pick(args.interval, cfg, "interval")?.unwrap_or(1800.0);
    let baseline = parse_snapshot_csv(&read_input(&args.baseline)?)?;
    let run = parse_snapshot_csv(&read_input(&args.run)?)?;
    let cmp = compare_runs(&baseline, &run, interval)?;
    emit(&args.out, &cmp.to_csv(), out)?;
    if args.pretty {
        let _ = write!(out, "{}", cmp.pretty());
    }
    Ok(())
}

fn scientific(v: &BigUint) -> String {
    let (mantissa, exp) = significant_figures(v, 3);
    format!("{v} ({mantissa} × 10^{exp})")
}

fn cmd_info(args: &InfoArgs, out: &mut dyn Write) -> CliResult<()> {
    if let Some(v) = &args.cps {
        let count = max_cps_count(v[0], v[1])?;
        let _ = writeln!(out, "{}", scientific(&count));
    } else if let Some(n) = args.dags {
        if n > 1000 {
            return Err(Failure::usage("--dags is limited to N <= 1000"));
        }
        let _ = writeln!(out, "{}", scientific(&count_dags(n)));
    } else if let Some(v) = &args.required_m {
        let p: f64 = v[0].parse().map_err(|_| Failure::usage(format!("invalid rate {:?}", v[0])))?;
        let n: u32 = v[1].parse().map_err(|_| Failure::usage(format!("invalid node count {:?}", v[1])))?;
        let m = required_m(p, n)?;
        if m.saturated {
            let _ = writeln!(out, "inf (exceeds the f64 range, log m = {})", -(n as f64) * p.ln());
        } else {
            let _ = writeln!(out, "{}", m.value);
        }
    }
    Ok(())
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code. `cancel` stops a running search early.
pub fn run<I, T>(args: I, cancel: Option<Arc<AtomicBool>>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = (|| {
        let cfg = match &cli.config {
            Some(p) => ConfigFile::parse(&read_input(p)?)?,
            None => ConfigFile::default(),
        };
        match &cli.command {
            Command::Score(a) => cmd_score(a, &cfg, out, err),
            Command::Learn(a) => cmd_learn(a, &cfg, cancel, out, err),
            Command::Compare(a) => cmd_compare(a, &cfg, out),
            Command::Info(a) => cmd_info(a, out),
        }
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
