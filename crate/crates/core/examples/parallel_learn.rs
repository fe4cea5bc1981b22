//! Parallel sampled search end to end: generate data, score it, run several
//! memetic searches on rank-sampled tables and keep the best DAG.
//!
//! `cargo run --release --example parallel_learn`

use psminobs::io::write_dag;
use psminobs::{build_score_table, ps_minobs, Budget, Dataset, RunConfig, ScoringConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Chain `x0 -> x1 -> ... -> x{n-1}` with noisy copies, three states each.
fn chain_data(n: usize, rows: usize, rng: &mut ChaCha8Rng) -> psminobs::Result<Dataset> {
    let data = (0..rows)
        .map(|_| {
            let mut row = vec![rng.random_range(0..3)];
            for v in 1..n {
                let prev = row[v - 1];
                row.push(if rng.random_bool(0.8) { prev } else { rng.random_range(0..3) });
            }
            row
        })
        .collect();
    Dataset::new(n, data, Some(vec![3; n]), None)
}

fn main() -> psminobs::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data = chain_data(10, 2_000, &mut rng)?;
    let table = build_score_table(&data, &ScoringConfig { max_indegree: 2, ..Default::default() })?;
    println!("{} parent sets after pruning", table.total_entries());

    let cfg = RunConfig { snapshot_interval: 0.5, base_seed: 5, ..RunConfig::new(0.3, 4, Budget::seconds(2.0))? };
    let report = ps_minobs(&table, &cfg)?;
    println!("{}", report.summary());
    print!("{}", write_dag(&report.dag, table.names()));
    Ok(())
}
