//! Per-interval relative discrepancy between a baseline series and the
//! workers of a sampled run, using best-so-far scores at each boundary.
//!
//! `cargo run --example compare_runs`

use psminobs::{compare_runs, delta, Snapshot};

fn main() -> psminobs::Result<()> {
    let baseline = [(600.0, -5210.4), (1500.0, -5190.2), (2900.0, -5188.7)].map(|(elapsed, score)| Snapshot {
        worker: 0,
        elapsed,
        score,
    });
    let run =
        [(1, 900.0, -5201.0), (1, 2100.0, -5187.9), (2, 700.0, -5195.5), (2, 2500.0, -5190.0), (3, 1700.0, -5186.3)]
            .map(|(worker, elapsed, score)| Snapshot { worker, elapsed, score });

    let cmp = compare_runs(&baseline, &run, 1000.0)?;
    print!("{}", cmp.pretty());
    println!();
    print!("{}", cmp.to_csv());
    // positive means the run beat the baseline
    println!("\nsingle value: {:.6}", delta(-620010.1, -619990.9)?);
    Ok(())
}
