//! Search over node orderings: score a random ordering, climb to an
//! insert-move local optimum, then run the memetic search on the same table.
//!
//! `cargo run --example order_search`

use psminobs::io::write_dag;
use psminobs::search::{inobs_local_search, random_ordering};
use psminobs::{
    minobs_search, ordering_score, Deadline, NodeScoreTable, ParentSet, ScoreTable, ScoredParentSet, SearchConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random table over `n` nodes with every parent set of size at most two.
fn random_table(n: usize, rng: &mut ChaCha8Rng) -> psminobs::Result<ScoreTable> {
    let tables = (0..n)
        .map(|node| {
            let others: Vec<usize> = (0..n).filter(|&v| v != node).collect();
            let mut entries = vec![ScoredParentSet::new(ParentSet::empty(), rng.random_range(-80.0..-60.0))];
            for (i, &a) in others.iter().enumerate() {
                entries.push(ScoredParentSet::new(ParentSet::new(vec![a])?, rng.random_range(-75.0..-40.0)));
                for &b in &others[i + 1..] {
                    entries.push(ScoredParentSet::new(ParentSet::new(vec![a, b])?, rng.random_range(-70.0..-20.0)));
                }
            }
            NodeScoreTable::new(node, entries)
        })
        .collect::<psminobs::Result<Vec<_>>>()?;
    ScoreTable::new(tables, None)
}

fn main() -> psminobs::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let table = random_table(12, &mut rng)?;

    let start = random_ordering(12, &mut rng);
    println!("random ordering     {:?}  score {:.3}", start.sequence(), ordering_score(&start, &table).total);

    let local = inobs_local_search(&start, &table, &Deadline::steps(u64::MAX), &mut rng);
    println!("insert local optimum {:?}  score {:.3}", local.ordering.sequence(), local.total);

    let cfg = SearchConfig { rng_seed: 3, snapshot_interval: 500.0, ..Default::default() };
    let best = minobs_search(&table, &cfg, &Deadline::steps(5_000), &mut |snap| {
        println!("  step {:>5}: best {:.3}", snap.elapsed, snap.score);
    })?;
    println!("memetic search       {:?}  score {:.3}\n", best.ordering.sequence(), best.total);
    print!("{}", write_dag(&best.to_dag(), table.names()));
    Ok(())
}
