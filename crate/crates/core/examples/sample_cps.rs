//! Rank sampling of candidate parent sets. Subset 1 keeps the top-ranked
//! fraction; later subsets draw ranks with half-normal weights.
//!
//! `cargo run --example sample_cps`

use psminobs::sampler::{half_normal_weights, required_m, select_ranks};
use psminobs::SamplingConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psminobs::Result<()> {
    let cfg = SamplingConfig::new(0.2)?;
    let len = 30;
    let empty_rank = 25;
    println!("table of {len} parent sets, empty set at rank {}, p = 0.2", empty_rank + 1);
    println!("sigma {:.1}, {} ranks drawn per subset\n", cfg.sigma_for(len), cfg.subset_size(len));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in 1..=5 {
        let ranks: Vec<usize> = select_ranks(s, &cfg, len, empty_rank, &mut rng).iter().map(|r| r + 1).collect();
        println!("subset {s}: ranks {ranks:?}");
    }

    let w = half_normal_weights(cfg.sigma_for(len), len);
    println!("\nrank weights: 1 -> {:.4}, 10 -> {:.4}, 30 -> {:.6}", w[0], w[9], w[29]);
    for (p, n) in [(0.5, 10), (0.98, 100), (0.1, 37)] {
        let m = required_m(p, n)?;
        println!("subsets needed to match the full combination count at p = {p}, n = {n}: {:.4e}", m.value);
    }
    Ok(())
}
