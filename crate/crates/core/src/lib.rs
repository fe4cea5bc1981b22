//! Bayesian network structure learning over candidate parent sets.
//!
//! The pipeline is: count and score candidate parent sets with BDeu
//! ([`scoring`]), prune dominated sets, search node orderings with
//! insert-neighbourhood local search inside a memetic loop ([`search`]),
//! and optionally run many such searches in parallel on rank-sampled copies
//! of the score table ([`sampler`], [`engine`]).
//!
//! Runnable examples live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `score_dataset` | BDeu scoring and pruning of a small dataset |
//! | `prune_asia` | dominance pruning on a hand-written score table |
//! | `order_search` | ordering evaluation, INOBS and memetic search |
//! | `sample_cps` | half-normal rank sampling of a score table |
//! | `parallel_learn` | the parallel sampled search end to end |
//! | `compare_runs` | per-interval Δ between two snapshot series |
//! | `counting_info` | parent-set and DAG counts |

pub mod cli;
pub mod engine;
pub mod error;
pub mod io;
pub mod model;
pub mod sampler;
pub mod scoring;
pub mod search;

pub use engine::{compare_runs, delta, ps_minobs, Comparison, RunConfig, RunReport, WorkerReport};
pub use error::{Error, Result};
pub use model::{Dag, Dataset, NodeScoreTable, Ordering, ParentSet, ScoreTable, ScoredParentSet};
pub use sampler::{sample_node_subset, sample_score_table, SamplingConfig, SigmaRule};
pub use scoring::{bdeu_local_score, build_score_table, prune_table, ScoringConfig};
pub use search::{minobs_search, ordering_score, Budget, Deadline, OrderingEvaluation, SearchConfig, Snapshot};
