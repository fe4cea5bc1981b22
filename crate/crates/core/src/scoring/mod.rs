//! BDeu scoring of candidate parent sets, subset-dominance pruning, and
//! counting utilities.

mod bdeu;
mod combinatorics;
mod counts;

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

pub use bdeu::bdeu_local_score;
pub use combinatorics::{binomial, count_dags, cps_per_node, max_cps_count, significant_figures};
pub use counts::{count_configurations, ConfigCounts, ContingencyCounts};

use crate::error::{Error, Result};
use crate::model::{Dataset, NodeScoreTable, ParentSet, ScoreTable, ScoredParentSet};

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoringConfig {
    pub max_indegree: usize,
    /// Equivalent sample size `N'`.
    pub ess: f64,
    pub prune: bool,
    /// Refuse to enumerate more parent sets than this per node.
    pub enumeration_cap: u128,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig { max_indegree: 3, ess: 1.0, prune: true, enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl ScoringConfig {
    pub fn validate(&self, num_vars: usize) -> Result<()> {
        if !(self.ess > 0.0 && self.ess.is_finite()) {
            return Err(Error::InvalidEss(self.ess));
        }
        if self.max_indegree >= num_vars {
            return Err(Error::InvalidIndegree { max_indegree: self.max_indegree, num_vars });
        }
        Ok(())
    }
}

fn per_node_count(num_vars: usize, d: usize) -> u128 {
    let others = num_vars as u128 - 1;
    let mut c: u128 = 1;
    let mut total: u128 = 1;
    for k in 1..=d as u128 {
        c = c.saturating_mul(others + 1 - k) / k;
        total = total.saturating_add(c);
    }
    total
}

/// Scores every subset of the other variables with at most
/// `cfg.max_indegree` members.
pub fn enumerate_scored(data: &Dataset, child: usize, cfg: &ScoringConfig) -> Result<NodeScoreTable> {
    let n = data.num_vars();
    cfg.validate(n)?;
    if child >= n {
        return Err(Error::InvalidIndex { index: child, num_vars: n });
    }
    let requested = per_node_count(n, cfg.max_indegree);
    if requested > cfg.enumeration_cap {
        return Err(Error::CombinatorialCap { requested, cap: cfg.enumeration_cap });
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != child).collect();
    let mut entries = Vec::with_capacity(requested as usize);
    for k in 0..=cfg.max_indegree {
        for members in others.iter().copied().combinations(k) {
            let parents = ParentSet::from_sorted(members);
            let score = bdeu_local_score(data, child, &parents, cfg.ess)?;
            entries.push(ScoredParentSet::new(parents, score));
        }
    }
    NodeScoreTable::new(child, entries)
}

/// Drops every parent set that some proper subset in the table scores at
/// least as well as. Subsets are looked up among all input entries, pruned
/// or not. The empty set always survives.
pub fn prune_table(table: &NodeScoreTable) -> Result<NodeScoreTable> {
    let node = table.node();
    if !table.entries().iter().any(|e| e.parents.is_empty()) {
        return Err(Error::MissingEmptySet(node));
    }
    let lookup: HashMap<&ParentSet, f64> = table.entries().iter().map(|e| (&e.parents, e.score)).collect();

    let dominated = |e: &ScoredParentSet| -> bool {
        let members = e.parents.members();
        let k = members.len();
        if k == 0 {
            return false;
        }
        if k > 20 {
            return table
                .entries()
                .iter()
                .any(|s| s.parents.len() < k && s.parents.is_subset_of(&e.parents) && s.score >= e.score);
        }
        (0..(1u32 << k) - 1).any(|mask| {
            let subset = ParentSet::from_sorted((0..k).filter(|b| mask & (1 << b) != 0).map(|b| members[b]).collect());
            lookup.get(&subset).is_some_and(|&s| s >= e.score)
        })
    };

    let kept = table.entries().iter().filter(|e| !dominated(e)).cloned().collect();
    NodeScoreTable::new(node, kept)
}

/// Scores (and optionally prunes) every node. Nodes are processed in
/// parallel; the result does not depend on scheduling.
pub fn build_score_table(data: &Dataset, cfg: &ScoringConfig) -> Result<ScoreTable> {
    cfg.validate(data.num_vars())?;
    let tables = (0..data.num_vars())
        .into_par_iter()
        .map(|child| {
            let full = enumerate_scored(data, child, cfg)?;
            if cfg.prune {
                prune_table(&full)
            } else {
                Ok(full)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ScoreTable::new(tables, Some(data.names_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[usize]) -> ParentSet {
        ParentSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        let rows = vec![vec![0, 1, 0, 1], vec![1, 1, 0, 0], vec![0, 0, 1, 1]];
        let d = Dataset::new(4, rows, None, None).unwrap();
        let cfg = ScoringConfig { max_indegree: 3, prune: false, ..Default::default() };
        assert_eq!(enumerate_scored(&d, 0, &cfg).unwrap().len(), 8);
        let cfg0 = ScoringConfig { max_indegree: 0, ..cfg.clone() };
        let t = enumerate_scored(&d, 2, &cfg0).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.entries()[0].parents.is_empty());
    }

    #[test]
    fn ten_nodes_indegree_one() {
        let rows: Vec<Vec<usize>> = (0..20).map(|i| (0..10).map(|j| (i * j) % 2).collect()).collect();
        let d = Dataset::new(10, rows, None, None).unwrap();
        let cfg = ScoringConfig { max_indegree: 1, prune: false, ..Default::default() };
        let t = build_score_table(&d, &cfg).unwrap();
        assert!(t.tables().iter().all(|nt| nt.len() == 10));
        assert_eq!(t.total_entries(), 100);
    }

    #[test]
    fn cap_is_enforced() {
        let d = Dataset::new(30, vec![vec![0; 30]], None, None).unwrap();
        let cfg = ScoringConfig { max_indegree: 5, enumeration_cap: 1000, ..Default::default() };
        assert!(matches!(enumerate_scored(&d, 0, &cfg), Err(Error::CombinatorialCap { .. })));
    }

    #[test]
    fn dominant_empty_set_is_alone() {
        let t = NodeScoreTable::new(
            0,
            vec![
                ScoredParentSet::new(ps(&[]), -1.0),
                ScoredParentSet::new(ps(&[1]), -2.0),
                ScoredParentSet::new(ps(&[2]), -1.5),
                ScoredParentSet::new(ps(&[1, 2]), -1.2),
            ],
        )
        .unwrap();
        let p = prune_table(&t).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.entries()[0].parents.is_empty());
    }

    #[test]
    fn equal_subset_score_prunes_superset() {
        let t = NodeScoreTable::new(
            0,
            vec![
                ScoredParentSet::new(ps(&[]), -3.0),
                ScoredParentSet::new(ps(&[1]), -2.0),
                ScoredParentSet::new(ps(&[1, 2]), -2.0),
            ],
        )
        .unwrap();
        let p = prune_table(&t).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.score_of(&ps(&[1, 2])).is_none());
    }
}
