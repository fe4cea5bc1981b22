//! Counting utilities: candidate parent sets under an in-degree cap and
//! labelled DAGs, exact and to three significant figures.
//!
//! `cargo run --example counting_info`

use psminobs::scoring::{count_dags, max_cps_count, significant_figures};

fn main() -> psminobs::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10}", "nodes", "d=1", "d=2", "d=3");
    for n in [10u64, 50, 100, 1000] {
        let cells = (1..=3u64)
            .map(|d| {
                let (m, e) = significant_figures(&max_cps_count(n, d)?, 3);
                Ok(format!("{m}e{e}"))
            })
            .collect::<psminobs::Result<Vec<_>>>()?;
        println!("{n:>6} {:>10} {:>10} {:>10}", cells[0], cells[1], cells[2]);
    }
    println!();
    for n in 1..=7u64 {
        println!("labelled DAGs on {n} nodes: {}", count_dags(n));
    }
    println!("\nDAGs on 37 nodes: {}", count_dags(37));
    Ok(())
}
