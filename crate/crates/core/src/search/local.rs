use rand::seq::SliceRandom;
use rand::Rng;

use super::budget::{Deadline, Snapshot, Tracker};
use super::evaluate::{OrderingEvaluation, WorkingOrder};
use super::moves::random_ordering;
use crate::model::{Ordering, ScoreTable};

fn improvement_threshold(total: f64) -> f64 {
    1e-9_f64.max(1e-12 * total.abs())
}

/// Insert-neighbourhood hill climbing from `start`.
///
/// Nodes are visited in a random order; each visit evaluates every insert
/// position of that node and applies the best one if it improves the score.
/// Stops after a full pass without improvement or when the deadline hits.
pub fn inobs_local_search<R: Rng + ?Sized>(
    start: &Ordering,
    table: &ScoreTable,
    deadline: &Deadline,
    rng: &mut R,
) -> OrderingEvaluation {
    let mut sink = |_: Snapshot| {};
    let mut tracker = Tracker::new(deadline, f64::INFINITY, 0, &mut sink);
    inobs_tracked(start, table, &mut tracker, rng)
}

pub(crate) fn inobs_tracked<R: Rng + ?Sized>(
    start: &Ordering,
    table: &ScoreTable,
    tracker: &mut Tracker<'_>,
    rng: &mut R,
) -> OrderingEvaluation {
    let mut state = WorkingOrder::new(start.sequence().to_vec(), table);
    tracker.observe(state.total);
    let n = state.len();
    let mut visit: Vec<usize> = (0..n).collect();
    'passes: loop {
        visit.shuffle(rng);
        let mut improved = false;
        for &node in &visit {
            if !tracker.tick() {
                break 'passes;
            }
            let from = state.order.iter().position(|&v| v == node).expect("node in order");
            let (delta, to) = state.best_insert_for(from);
            if delta > improvement_threshold(state.total) {
                let before = state.total;
                state.apply_insert(from, to);
                debug_assert!(state.total >= before - 1e-9);
                tracker.observe(state.total);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    state.to_evaluation()
}

/// Steepest-ascent swap-adjacent hill climbing from `start`.
pub(crate) fn obs_tracked(start: &Ordering, table: &ScoreTable, tracker: &mut Tracker<'_>) -> OrderingEvaluation {
    let mut state = WorkingOrder::new(start.sequence().to_vec(), table);
    tracker.observe(state.total);
    let n = state.len();
    while n >= 2 && tracker.tick() {
        let (delta, i) = (0..n - 1).map(|i| (state.swap_delta(i), i)).fold((f64::NEG_INFINITY, 0), |best, c| {
            if c.0 > best.0 {
                c
            } else {
                best
            }
        });
        if delta <= improvement_threshold(state.total) {
            break;
        }
        state.apply_swap(i);
        tracker.observe(state.total);
    }
    state.to_evaluation()
}

/// Which local search a restart loop runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalSearch {
    /// Swap-adjacent moves.
    Obs,
    /// Insert moves.
    Inobs,
}

/// Repeats a local search from fresh random orderings until the deadline
/// (or once when `restarts` is false) and keeps the best result.
pub(crate) fn restart_search<R: Rng + ?Sized>(
    kind: LocalSearch,
    table: &ScoreTable,
    restarts: bool,
    tracker: &mut Tracker<'_>,
    rng: &mut R,
) -> OrderingEvaluation {
    let n = table.num_vars();
    let mut best: Option<OrderingEvaluation> = None;
    loop {
        let start = random_ordering(n, rng);
        let result = match kind {
            LocalSearch::Obs => obs_tracked(&start, table, tracker),
            LocalSearch::Inobs => inobs_tracked(&start, table, tracker, rng),
        };
        if best.as_ref().is_none_or(|b| result.total > b.total) {
            best = Some(result);
        }
        if !restarts || tracker.exhausted() {
            break;
        }
    }
    best.expect("at least one run")
}
