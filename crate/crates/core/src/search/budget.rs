use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// How much work a search may do.
///
/// `Steps` counts units of search work (one insert-neighbourhood sweep of a
/// node, one swap scan, or one full ordering evaluation) and makes runs
/// reproducible. Under `Steps`, elapsed time and snapshot intervals are
/// measured in steps as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    WallClock(Duration),
    Steps(u64),
}

impl Budget {
    pub fn seconds(secs: f64) -> Self {
        Budget::WallClock(Duration::from_secs_f64(secs.max(0.0)))
    }

    /// Budget limit in the unit snapshots are measured in.
    pub fn limit(&self) -> f64 {
        match self {
            Budget::WallClock(d) => d.as_secs_f64(),
            Budget::Steps(s) => *s as f64,
        }
    }
}

/// A deadline shared by every worker of a run. Each worker derives its own
/// [`Clock`]; step counters are never shared.
#[derive(Debug, Clone)]
pub struct Deadline {
    start: Instant,
    budget: Budget,
    cancel: Option<Arc<AtomicBool>>,
}

impl Deadline {
    pub fn new(budget: Budget) -> Self {
        Deadline { start: Instant::now(), budget, cancel: None }
    }

    pub fn steps(n: u64) -> Self {
        Deadline::new(Budget::Steps(n))
    }

    pub fn seconds(secs: f64) -> Self {
        Deadline::new(Budget::seconds(secs))
    }

    /// Any search polling this deadline stops once `flag` is set.
    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn clock(&self) -> Clock {
        Clock { deadline: self.clone(), steps: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Clock {
    deadline: Deadline,
    steps: u64,
}

impl Clock {
    pub fn exhausted(&self) -> bool {
        if let Some(flag) = &self.deadline.cancel {
            if flag.load(AtomicOrdering::Relaxed) {
                return true;
            }
        }
        match self.deadline.budget {
            Budget::WallClock(limit) => self.deadline.start.elapsed() >= limit,
            Budget::Steps(limit) => self.steps >= limit,
        }
    }

    /// Claims one unit of work; `false` when the budget is already spent.
    pub fn tick(&mut self) -> bool {
        if self.exhausted() {
            return false;
        }
        self.steps += 1;
        true
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Seconds since the deadline was created, or steps under a step budget.
    pub fn elapsed(&self) -> f64 {
        match self.deadline.budget {
            Budget::WallClock(_) => self.deadline.start.elapsed().as_secs_f64(),
            Budget::Steps(_) => self.steps as f64,
        }
    }
}

/// A best-score record taken during search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub worker: usize,
    pub elapsed: f64,
    pub score: f64,
}

/// Tracks the best score of one search and reports it at every interval
/// boundary. Boundary snapshots carry the boundary time itself.
pub(crate) struct Tracker<'s> {
    clock: Clock,
    interval: f64,
    next_boundary: f64,
    best: f64,
    worker: usize,
    last_emitted: Option<f64>,
    sink: &'s mut dyn FnMut(Snapshot),
}

impl<'s> Tracker<'s> {
    pub(crate) fn new(deadline: &Deadline, interval: f64, worker: usize, sink: &'s mut dyn FnMut(Snapshot)) -> Self {
        let interval = if interval > 0.0 { interval } else { f64::INFINITY };
        Tracker {
            clock: deadline.clock(),
            interval,
            next_boundary: interval,
            best: f64::NEG_INFINITY,
            worker,
            last_emitted: None,
            sink,
        }
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.clock.exhausted()
    }

    pub(crate) fn tick(&mut self) -> bool {
        let ok = self.clock.tick();
        self.flush_boundaries();
        ok
    }

    pub(crate) fn observe(&mut self, score: f64) {
        if score > self.best {
            self.best = score;
        }
    }

    fn flush_boundaries(&mut self) {
        let now = self.clock.elapsed();
        while now >= self.next_boundary {
            if self.best.is_finite() {
                self.emit(self.next_boundary);
            }
            self.next_boundary += self.interval;
        }
    }

    fn emit(&mut self, elapsed: f64) {
        (self.sink)(Snapshot { worker: self.worker, elapsed, score: self.best });
        self.last_emitted = Some(elapsed);
    }

    /// Emits pending boundaries plus a closing snapshot at the current time.
    pub(crate) fn finish(&mut self) {
        self.flush_boundaries();
        let now = self.clock.elapsed();
        if self.best.is_finite() && self.last_emitted.is_none_or(|t| now > t) {
            self.emit(now);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_budget_counts_ticks() {
        let d = Deadline::steps(3);
        let mut c = d.clock();
        assert!(c.tick());
        assert!(c.tick());
        assert!(c.tick());
        assert!(!c.tick());
        assert!(c.exhausted());
        assert_eq!(c.elapsed(), 3.0);
    }

    #[test]
    fn zero_budget_is_exhausted() {
        assert!(Deadline::steps(0).clock().exhausted());
        assert!(Deadline::seconds(0.0).clock().exhausted());
    }

    #[test]
    fn cancel_flag_stops_clock() {
        let flag = Arc::new(AtomicBool::new(false));
        let d = Deadline::steps(100).with_cancel(flag.clone());
        let c = d.clock();
        assert!(!c.exhausted());
        flag.store(true, AtomicOrdering::Relaxed);
        assert!(c.exhausted());
    }

    #[test]
    fn tracker_emits_at_boundaries() {
        let mut out = Vec::new();
        {
            let mut sink = |s: Snapshot| out.push(s);
            let d = Deadline::steps(10);
            let mut t = Tracker::new(&d, 4.0, 7, &mut sink);
            t.observe(-10.0);
            for i in 0..10 {
                t.tick();
                t.observe(-10.0 + i as f64);
            }
            t.finish();
        }
        let times: Vec<f64> = out.iter().map(|s| s.elapsed).collect();
        assert_eq!(times, vec![4.0, 8.0, 10.0]);
        assert_eq!(out[0].score, -8.0);
        assert_eq!(out[2].score, -1.0);
        assert!(out.iter().all(|s| s.worker == 7));
    }
}
