use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::budget::{Deadline, Snapshot, Tracker};
use super::evaluate::OrderingEvaluation;
use super::local::{inobs_tracked, restart_search, LocalSearch};
use super::moves::{crossover, mutate, random_ordering};
use crate::error::{Error, Result};
use crate::model::{Ordering, ScoreTable};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub population_size: usize,
    pub mutation_rate: f64,
    /// Restart the plain local searches until the deadline.
    pub restarts: bool,
    /// Tabu tenure for swap search; `None` means the number of variables.
    /// Recorded only, swap search runs without a tabu list.
    pub tabu_tenure: Option<usize>,
    pub rng_seed: u64,
    /// Snapshot spacing, in the budget's unit.
    pub snapshot_interval: f64,
    /// Id stamped on emitted snapshots.
    pub worker_id: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            population_size: 20,
            mutation_rate: 0.1,
            restarts: true,
            tabu_tenure: None,
            rng_seed: 0,
            snapshot_interval: 1800.0,
            worker_id: 1,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "population size must be at least 2, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidConfig(format!("mutation rate {} outside [0, 1]", self.mutation_rate)));
        }
        if self.snapshot_interval.is_nan() || self.snapshot_interval <= 0.0 {
            return Err(Error::InvalidConfig("snapshot interval must be positive".into()));
        }
        Ok(())
    }
}

fn by_rank(a: &OrderingEvaluation, b: &OrderingEvaluation) -> std::cmp::Ordering {
    b.total.total_cmp(&a.total).then_with(|| a.ordering.sequence().cmp(b.ordering.sequence()))
}

/// Truncation survival preferring distinct orderings; duplicates only fill
/// leftover slots.
fn survivors(mut pool: Vec<OrderingEvaluation>, size: usize) -> Vec<OrderingEvaluation> {
    pool.sort_by(by_rank);
    let mut seen = HashSet::new();
    let (mut kept, duplicates): (Vec<_>, Vec<_>) = pool.into_iter().partition(|e| seen.insert(e.ordering.clone()));
    kept.extend(duplicates);
    kept.truncate(size);
    kept
}

/// Memetic insert-neighbourhood search.
///
/// A population of random orderings is locally optimised, then each
/// generation breeds as many offspring as the population size (crossover of
/// two distinct members followed by mutation), optimises them, and keeps the
/// best distinct orderings. Runs until the deadline and returns the best
/// ordering ever seen.
pub fn minobs_search(
    table: &ScoreTable,
    cfg: &SearchConfig,
    deadline: &Deadline,
    sink: &mut dyn FnMut(Snapshot),
) -> Result<OrderingEvaluation> {
    minobs_search_from(table, cfg, None, deadline, sink)
}

/// [`minobs_search`] with an explicit initial population. Missing members
/// (when `initial` is `None` or short) are drawn at random.
pub fn minobs_search_from(
    table: &ScoreTable,
    cfg: &SearchConfig,
    initial: Option<&[Ordering]>,
    deadline: &Deadline,
    sink: &mut dyn FnMut(Snapshot),
) -> Result<OrderingEvaluation> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut tracker = Tracker::new(deadline, cfg.snapshot_interval, cfg.worker_id, sink);
    let n = table.num_vars();
    let initial = initial.unwrap_or(&[]);
    if let Some(o) = initial.iter().find(|o| o.len() != n) {
        return Err(Error::LengthMismatch(n, o.len()));
    }

    let mut population: Vec<OrderingEvaluation> = Vec::with_capacity(cfg.population_size);
    for i in 0..cfg.population_size {
        let start = match initial.get(i) {
            Some(o) => o.clone(),
            None => random_ordering(n, &mut rng),
        };
        population.push(inobs_tracked(&start, table, &mut tracker, &mut rng));
        if tracker.exhausted() {
            break;
        }
    }
    population.sort_by(by_rank);
    let mut best = population[0].clone();

    while !tracker.exhausted() && population.len() >= 2 {
        let mut offspring = Vec::with_capacity(cfg.population_size);
        for _ in 0..cfg.population_size {
            let a = rng.random_range(0..population.len());
            let mut b = rng.random_range(0..population.len() - 1);
            if b >= a {
                b += 1;
            }
            let child = crossover(&population[a].ordering, &population[b].ordering, &mut rng)?;
            let child = mutate(&child, cfg.mutation_rate, &mut rng);
            offspring.push(inobs_tracked(&child, table, &mut tracker, &mut rng));
            if tracker.exhausted() {
                break;
            }
        }
        population.extend(offspring);
        population = survivors(population, cfg.population_size);
        if population[0].total > best.total {
            best = population[0].clone();
        }
    }
    tracker.observe(best.total);
    tracker.finish();
    Ok(best)
}

/// Plain restart-based local search with the same snapshot contract as
/// [`minobs_search`].
pub fn local_search_with_restarts(
    kind: LocalSearch,
    table: &ScoreTable,
    cfg: &SearchConfig,
    deadline: &Deadline,
    sink: &mut dyn FnMut(Snapshot),
) -> OrderingEvaluation {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut tracker = Tracker::new(deadline, cfg.snapshot_interval, cfg.worker_id, sink);
    let best = restart_search(kind, table, cfg.restarts, &mut tracker, &mut rng);
    tracker.observe(best.total);
    tracker.finish();
    best
}
