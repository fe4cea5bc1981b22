//! Scores every parent set of a small generated dataset with BDeu, prunes
//! dominated sets and prints the resulting score file.
//!
//! `cargo run --example score_dataset`

use psminobs::io::write_score_file;
use psminobs::{build_score_table, Dataset, ScoringConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> psminobs::Result<()> {
    // rain -> wet <- sprinkler, with some noise
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rows: Vec<Vec<usize>> = (0..500)
        .map(|_| {
            let rain = usize::from(rng.random_bool(0.3));
            let sprinkler = usize::from(rng.random_bool(if rain == 1 { 0.1 } else { 0.5 }));
            let wet = usize::from(rng.random_bool(if rain + sprinkler > 0 { 0.9 } else { 0.05 }));
            vec![rain, sprinkler, wet]
        })
        .collect();
    let names = ["rain", "sprinkler", "wet"].map(String::from).to_vec();
    let data = Dataset::new(3, rows, None, Some(names))?;

    let full = build_score_table(&data, &ScoringConfig { max_indegree: 2, prune: false, ..Default::default() })?;
    let pruned = build_score_table(&data, &ScoringConfig { max_indegree: 2, ..Default::default() })?;
    println!("{} parent sets scored, {} left after pruning\n", full.total_entries(), pruned.total_entries());
    print!("{}", write_score_file(&pruned));
    Ok(())
}
