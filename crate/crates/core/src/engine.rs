//! Parallel sampled search: `m` workers each search their own sampled copy
//! of the score table under one shared deadline, and the best DAG wins.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::AtomicBool;
use std::sync::mpsc;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Dag, ScoreTable};
use crate::sampler::{sample_score_table, SamplingConfig};
use crate::search::{minobs_search, Budget, Deadline, OrderingEvaluation, SearchConfig, Snapshot};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sampling: SamplingConfig,
    /// Number of sampled subproblems (workers).
    pub m: usize,
    pub budget: Budget,
    /// Snapshot spacing in the budget's unit.
    pub snapshot_interval: f64,
    pub base_seed: u64,
    /// Maximum workers running at once; 0 means `m`.
    pub threads: usize,
    pub search: SearchConfig,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl RunConfig {
    pub fn new(p: f64, m: usize, budget: Budget) -> Result<Self> {
        Ok(RunConfig {
            sampling: SamplingConfig::new(p)?,
            m,
            budget,
            snapshot_interval: 1800.0,
            base_seed: 0,
            threads: 0,
            search: SearchConfig::default(),
            cancel: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.sampling.validate()?;
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if self.snapshot_interval.is_nan() || self.snapshot_interval <= 0.0 {
            return Err(Error::InvalidConfig("snapshot interval must be positive".into()));
        }
        if self.snapshot_interval > self.budget.limit() {
            return Err(Error::InvalidConfig(format!(
                "snapshot interval {} exceeds the budget {}",
                self.snapshot_interval,
                self.budget.limit()
            )));
        }
        self.search.validate()
    }

    /// Search seed of worker `s`; worker 1 uses the base seed itself.
    pub fn worker_seed(&self, s: usize) -> u64 {
        self.base_seed.wrapping_add((s as u64 - 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkerReport {
    /// 1-based subset index; subset 1 uses the truncation strategy.
    pub s: usize,
    /// Retained parent sets per node after sampling.
    pub sampled_sizes: Vec<usize>,
    pub snapshots: Vec<Snapshot>,
    pub outcome: std::result::Result<OrderingEvaluation, String>,
}

impl WorkerReport {
    pub fn final_score(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|e| e.total)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub workers: Vec<WorkerReport>,
    /// Subset index of the winning worker.
    pub winner: usize,
    pub dag: Dag,
    pub baseline: Option<f64>,
    /// Δ of each worker's final score against `baseline`.
    pub deltas: Option<Vec<Option<f64>>>,
}

impl RunReport {
    pub fn winner_score(&self) -> f64 {
        self.dag.score
    }

    pub fn all_snapshots(&self) -> Vec<Snapshot> {
        self.workers.iter().flat_map(|w| w.snapshots.iter().copied()).collect()
    }

    /// Attaches a baseline score and computes per-worker Δ.
    pub fn with_baseline(mut self, s_star: f64) -> Result<Self> {
        let deltas = self
            .workers
            .iter()
            .map(|w| w.final_score().map(|s| delta(s_star, s)).transpose())
            .collect::<Result<Vec<_>>>()?;
        self.baseline = Some(s_star);
        self.deltas = Some(deltas);
        Ok(self)
    }

    /// One row per snapshot: `worker,elapsed_s,score`.
    pub fn to_csv(&self) -> String {
        snapshots_to_csv(&self.all_snapshots())
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "workers {}", self.workers.len());
        for w in &self.workers {
            let total: usize = w.sampled_sizes.iter().sum();
            match &w.outcome {
                Ok(e) => {
                    let _ = writeln!(out, "worker {} sampled {} score {:?}", w.s, total, e.total);
                }
                Err(msg) => {
                    let _ = writeln!(out, "worker {} sampled {} failed {}", w.s, total, msg);
                }
            }
        }
        let _ = writeln!(out, "winner {}", self.winner);
        let _ = writeln!(out, "score {:?}", self.dag.score);
        if let (Some(b), Some(d)) = (self.baseline, &self.deltas) {
            let _ = writeln!(out, "baseline {b:?}");
            for (w, d) in self.workers.iter().zip(d) {
                if let Some(d) = d {
                    let _ = writeln!(out, "delta S{} {}", w.s, format_permille(*d));
                }
            }
        }
        out
    }
}

fn run_worker(
    table: &ScoreTable,
    cfg: &RunConfig,
    s: usize,
    deadline: &Deadline,
    tx: mpsc::Sender<Snapshot>,
) -> WorkerReport {
    let mut sizes = Vec::new();
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<OrderingEvaluation> {
        let sampled = sample_score_table(s, &cfg.sampling, table, cfg.base_seed)?;
        sizes = sampled.tables().iter().map(|t| t.len()).collect();
        let search = SearchConfig {
            rng_seed: cfg.worker_seed(s),
            snapshot_interval: cfg.snapshot_interval,
            worker_id: s,
            ..cfg.search.clone()
        };
        let mut sink = |snap: Snapshot| {
            let _ = tx.send(snap);
        };
        minobs_search(&sampled, &search, deadline, &mut sink)
    }));
    let outcome = match outcome {
        Ok(Ok(eval)) => Ok(eval),
        Ok(Err(e)) => Err(e.to_string()),
        Err(panic) => Err(panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "worker panicked".into())),
    };
    WorkerReport { s, sampled_sizes: sizes, snapshots: Vec::new(), outcome }
}

/// Samples `m` subset tables, searches each under the shared budget, and
/// returns the highest-scoring DAG (lowest subset index on ties).
pub fn ps_minobs(table: &ScoreTable, cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut deadline = Deadline::new(cfg.budget);
    if let Some(flag) = &cfg.cancel {
        deadline = deadline.with_cancel(flag.clone());
    }
    let threads = if cfg.threads == 0 { cfg.m } else { cfg.threads.min(cfg.m) };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<Snapshot>();
    let mut workers: Vec<WorkerReport> = pool.install(|| {
        (1..=cfg.m).into_par_iter().map_with(tx, |tx, s| run_worker(table, cfg, s, &deadline, tx.clone())).collect()
    });
    for snap in rx.try_iter() {
        workers[snap.worker - 1].snapshots.push(snap);
    }

    let mut winner: Option<(usize, &OrderingEvaluation)> = None;
    for w in &workers {
        if let Ok(e) = &w.outcome {
            if winner.is_none_or(|(_, best)| e.total > best.total) {
                winner = Some((w.s, e));
            }
        }
    }
    let (s_star, best) = winner.ok_or(Error::AllWorkersFailed(cfg.m))?;
    let dag = best.to_dag();
    debug_assert_eq!(table.score_dag(&dag), Some(dag.score));
    Ok(RunReport { winner: s_star, dag, workers, baseline: None, deltas: None })
}

/// Relative discrepancy `(S* - S_i) / S*`; positive when `s_i` beats the
/// (negative) reference.
pub fn delta(s_star: f64, s_i: f64) -> Result<f64> {
    if s_star == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((s_star - s_i) / s_star)
}

/// `0.031` for a Δ of 3.1e-5, three decimals, no negative zero.
pub fn format_permille(d: f64) -> String {
    let s = format!("{:.3}", d * 1000.0);
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Per-interval Δ of every worker against a baseline series.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub boundaries: Vec<f64>,
    /// `(worker, Δ per boundary)`; `None` where a series has no value yet.
    pub workers: Vec<(usize, Vec<Option<f64>>)>,
    /// Best worker Δ per boundary.
    pub highest: Vec<Option<f64>>,
}

fn best_at(series: &[Snapshot], t: f64) -> Option<f64> {
    series.iter().filter(|s| s.elapsed <= t + 1e-9).map(|s| s.score).reduce(f64::max)
}

/// Compares run snapshots against baseline snapshots at every multiple of
/// `interval` covered by either series.
pub fn compare_runs(baseline: &[Snapshot], run: &[Snapshot], interval: f64) -> Result<Comparison> {
    if baseline.is_empty() || run.is_empty() {
        return Err(Error::EmptySeries);
    }
    if interval.is_nan() || interval <= 0.0 {
        return Err(Error::InvalidConfig("interval must be positive".into()));
    }
    let span = baseline.iter().chain(run).map(|s| s.elapsed).fold(0.0_f64, f64::max);
    let count = (span / interval + 1e-9).floor() as usize;
    if count == 0 {
        return Err(Error::IntervalTooLarge { interval });
    }
    let boundaries: Vec<f64> = (1..=count).map(|k| k as f64 * interval).collect();

    let mut ids: Vec<usize> = run.iter().map(|s| s.worker).collect();
    ids.sort_unstable();
    ids.dedup();

    let mut workers = Vec::with_capacity(ids.len());
    for id in ids {
        let series: Vec<Snapshot> = run.iter().filter(|s| s.worker == id).copied().collect();
        let row = boundaries
            .iter()
            .map(|&t| match (best_at(baseline, t), best_at(&series, t)) {
                (Some(b), Some(s)) => delta(b, s).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        workers.push((id, row));
    }
    let highest =
        (0..boundaries.len()).map(|k| workers.iter().filter_map(|(_, row)| row[k]).reduce(f64::max)).collect();
    Ok(Comparison { boundaries, workers, highest })
}

impl Comparison {
    /// Long format `row,elapsed_s,delta_permille`; rows are `S<worker>` and `highest`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,elapsed_s,delta_permille\n");
        let cell = |d: &Option<f64>| d.map(format_permille).unwrap_or_default();
        let rows = self
            .workers
            .iter()
            .map(|(id, row)| (format!("S{id}"), row))
            .chain(std::iter::once(("highest".to_string(), &self.highest)));
        for (label, row) in rows {
            for (t, d) in self.boundaries.iter().zip(row) {
                let _ = writeln!(out, "{label},{t:?},{}", cell(d));
            }
        }
        out
    }

    /// Wide table with ‰ values, one column per boundary.
    pub fn pretty(&self) -> String {
        let mut out = format!("{:<10}", "");
        for t in &self.boundaries {
            let _ = write!(out, "{:>12}", format!("{t}"));
        }
        out.push('\n');
        let rows = self
            .workers
            .iter()
            .map(|(id, row)| (format!("S{id}"), row))
            .chain(std::iter::once(("Highest".to_string(), &self.highest)));
        for (label, row) in rows {
            let _ = write!(out, "{label:<10}");
            for d in row {
                let cell = d.map(|d| format!("{}‰", format_permille(d))).unwrap_or_else(|| "-".into());
                let _ = write!(out, "{cell:>12}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn snapshots_to_csv(snapshots: &[Snapshot]) -> String {
    let mut out = String::from("worker,elapsed_s,score\n");
    for s in snapshots {
        let _ = writeln!(out, "{},{:?},{:?}", s.worker, s.elapsed, s.score);
    }
    out
}

pub fn parse_snapshot_csv(text: &str) -> Result<Vec<Snapshot>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "worker,elapsed_s,score" => {}
        Some((i, _)) => return Err(Error::parse(i + 1, "expected header worker,elapsed_s,score")),
        None => return Err(Error::EmptySeries),
    }
    lines
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            let bad = || Error::parse(i + 1, format!("malformed snapshot row {l:?}"));
            if f.len() != 3 {
                return Err(bad());
            }
            let worker = f[0].parse().map_err(|_| bad())?;
            let elapsed: f64 = f[1].parse().map_err(|_| bad())?;
            let score: f64 = f[2].parse().map_err(|_| bad())?;
            if !elapsed.is_finite() || !score.is_finite() {
                return Err(bad());
            }
            Ok(Snapshot { worker, elapsed, score })
        })
        .collect()
}
