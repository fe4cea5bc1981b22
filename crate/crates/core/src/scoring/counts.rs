use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Dataset, ParentSet};

/// Above this many cells the counts are kept in a hash map keyed by the
/// parent-value tuple instead of a dense grid.
const DENSE_LIMIT: usize = 1 << 20;

/// Counts for one observed parent configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigCounts {
    /// Parent values, in the order of the parent set's members.
    pub config: Vec<usize>,
    /// `N_ij`
    pub total: u64,
    /// `N_ijk` for each child value `k`.
    pub by_child: Vec<u64>,
}

/// Contingency counts of a child against one parent set.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyCounts {
    /// Only configurations seen in the data, in ascending tuple order.
    pub configs: Vec<ConfigCounts>,
    /// Child arity `r`.
    pub child_arity: usize,
    /// Full product of parent arities, observed or not.
    pub full_q: f64,
}

impl ContingencyCounts {
    pub fn observed(&self) -> usize {
        self.configs.len()
    }

    pub fn total(&self) -> u64 {
        self.configs.iter().map(|c| c.total).sum()
    }
}

pub(crate) fn check_indices(data: &Dataset, child: usize, parents: &ParentSet) -> Result<()> {
    let n = data.num_vars();
    if child >= n {
        return Err(Error::InvalidIndex { index: child, num_vars: n });
    }
    if let Some(&p) = parents.members().iter().find(|&&p| p >= n) {
        return Err(Error::InvalidIndex { index: p, num_vars: n });
    }
    if parents.contains(child) {
        return Err(Error::SelfParent(child));
    }
    Ok(())
}

/// Raw per-configuration child counts. Each callback receives the child
/// counts of one configuration with at least one observation.
pub(crate) enum CountGrid {
    Dense { cells: Vec<u32>, r: usize },
    Sparse { cells: HashMap<Vec<u32>, Vec<u32>> },
}

impl CountGrid {
    pub(crate) fn build(data: &Dataset, child: usize, parents: &ParentSet) -> CountGrid {
        let r = data.arities()[child];
        let child_col = data.column(child);
        let members = parents.members();
        let arities = data.arities();

        let dense_cells =
            members.iter().try_fold(r, |acc, &p| acc.checked_mul(arities[p])).filter(|&c| c <= DENSE_LIMIT);

        match dense_cells {
            Some(cells_len) => {
                let mut cells = vec![0u32; cells_len];
                let cols: Vec<&[u32]> = members.iter().map(|&p| data.column(p)).collect();
                for (row, &k) in child_col.iter().enumerate() {
                    let mut key = 0usize;
                    for (col, &p) in cols.iter().zip(members) {
                        key = key * arities[p] + col[row] as usize;
                    }
                    cells[key * r + k as usize] += 1;
                }
                CountGrid::Dense { cells, r }
            }
            None => {
                let mut cells: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
                for (row, &k) in child_col.iter().enumerate() {
                    let key: Vec<u32> = members.iter().map(|&p| data.column(p)[row]).collect();
                    cells.entry(key).or_insert_with(|| vec![0; r])[k as usize] += 1;
                }
                CountGrid::Sparse { cells }
            }
        }
    }

    pub(crate) fn for_each_observed(&self, mut f: impl FnMut(&[u32])) {
        match self {
            CountGrid::Dense { cells, r } => {
                for chunk in cells.chunks_exact(*r) {
                    if chunk.iter().any(|&c| c > 0) {
                        f(chunk);
                    }
                }
            }
            CountGrid::Sparse { cells } => {
                for counts in cells.values() {
                    f(counts);
                }
            }
        }
    }
}

/// Counts `N_ij` and `N_ijk` for `child` under `parents` in one pass over the rows.
pub fn count_configurations(data: &Dataset, child: usize, parents: &ParentSet) -> Result<ContingencyCounts> {
    check_indices(data, child, parents)?;
    let arities = data.arities();
    let r = arities[child];
    let full_q: f64 = parents.members().iter().map(|&p| arities[p] as f64).product();
    let grid = CountGrid::build(data, child, parents);

    let mut configs = match grid {
        CountGrid::Dense { cells, r } => cells
            .chunks_exact(r)
            .enumerate()
            .filter(|(_, chunk)| chunk.iter().any(|&c| c > 0))
            .map(|(j, chunk)| {
                // Decode mixed-radix index, last parent varies fastest.
                let mut config = vec![0; parents.len()];
                let mut rest = j;
                for (slot, &p) in config.iter_mut().zip(parents.members()).rev() {
                    *slot = rest % arities[p];
                    rest /= arities[p];
                }
                counts_from(config, chunk)
            })
            .collect::<Vec<_>>(),
        CountGrid::Sparse { cells } => cells
            .into_iter()
            .map(|(key, chunk)| counts_from(key.into_iter().map(|v| v as usize).collect(), &chunk))
            .collect(),
    };
    configs.sort_by(|a, b| a.config.cmp(&b.config));
    Ok(ContingencyCounts { configs, child_arity: r, full_q })
}

fn counts_from(config: Vec<usize>, chunk: &[u32]) -> ConfigCounts {
    let by_child: Vec<u64> = chunk.iter().map(|&c| c as u64).collect();
    ConfigCounts { config, total: by_child.iter().sum(), by_child }
}
