//! Order-based structure search: ordering evaluation, swap and insert
//! neighbourhoods, and the memetic population layer.

mod budget;
mod evaluate;
mod local;
mod memetic;
mod moves;

pub use budget::{Budget, Clock, Deadline, Snapshot};
pub use evaluate::{consistent_best_parents, evaluate_insert, ordering_score, OrderingEvaluation};
pub use local::{inobs_local_search, LocalSearch};
pub use memetic::{local_search_with_restarts, minobs_search, minobs_search_from, SearchConfig};
pub use moves::{crossover, crossover_with_slice, insert_move, mutate, random_ordering, swap_adjacent};
