//! Subset-dominance pruning on a hand-written four-variable score table:
//! a parent set is dropped when one of its subsets scores at least as well.
//!
//! `cargo run --example prune_asia`

use psminobs::{prune_table, NodeScoreTable, ParentSet, ScoredParentSet};

fn main() -> psminobs::Result<()> {
    let names = ["Asia", "Tub", "Smoke", "Lung"];
    let (a, t, s) = (0, 1, 2);
    let lung = [
        (vec![], -16.133),
        (vec![t], -14.299),
        (vec![a], -16.329),
        (vec![s], -17.692),
        (vec![t, s], -14.056),
        (vec![a, t], -14.676),
        (vec![a, s], -18.450),
        (vec![a, t, s], -14.410),
    ];
    let entries = lung
        .into_iter()
        .map(|(p, score)| Ok(ScoredParentSet::new(ParentSet::new(p)?, score)))
        .collect::<psminobs::Result<Vec<_>>>()?;
    let table = NodeScoreTable::new(3, entries)?;
    let kept = prune_table(&table)?;

    for e in table.entries() {
        let parents: Vec<&str> = e.parents.members().iter().map(|&p| names[p]).collect();
        let mark = if kept.entries().contains(e) { "keep" } else { "drop" };
        println!("{mark}  {:>9.3}  {{{}}}", e.score, parents.join(", "));
    }
    println!("\n{} of {} parent sets of Lung survive", kept.len(), table.len());
    Ok(())
}
