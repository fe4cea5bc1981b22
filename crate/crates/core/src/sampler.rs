//! Rank-based half-normal sampling of candidate parent sets.
//!
//! Subset `s = 1` is the deterministic truncation (top `ceil(p·N)` ranks plus
//! the last rank). Every other subset draws `ceil(p·N)` distinct ranks with
//! probability proportional to `exp(-k²/2σ²)`, sequentially renormalised over
//! the ranks not yet drawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{NodeScoreTable, ScoreTable};

/// How the half-normal scale is chosen per node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// `σ_i = factor · p · N_i`; the default factor is 0.5.
    Proportional(f64),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Sampling rate in (0, 1].
    pub p: f64,
    pub sigma: SigmaRule,
}

impl SamplingConfig {
    pub fn new(p: f64) -> Result<Self> {
        let cfg = SamplingConfig { p, sigma: SigmaRule::Proportional(0.5) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::InvalidConfig(format!("sampling rate {} outside (0, 1]", self.p)));
        }
        match self.sigma {
            SigmaRule::Proportional(f) | SigmaRule::Fixed(f) if !(f > 0.0 && f.is_finite()) => {
                Err(Error::InvalidConfig(format!("half-normal scale must be positive, got {f}")))
            }
            _ => Ok(()),
        }
    }

    pub fn sigma_for(&self, table_len: usize) -> f64 {
        match self.sigma {
            SigmaRule::Proportional(f) => f * self.p * table_len as f64,
            SigmaRule::Fixed(s) => s,
        }
    }

    /// Number of ranks drawn from a table of `table_len` entries.
    pub fn subset_size(&self, table_len: usize) -> usize {
        // Tolerance absorbs products like 0.1 * 30 = 3.0000000000000004.
        let raw = (self.p * table_len as f64 - 1e-9).ceil();
        (raw.max(1.0) as usize).min(table_len)
    }
}

/// Normalised weights `∝ exp(-k²/2σ²)` for ranks `k = 1..=n`.
pub fn half_normal_weights(sigma: f64, n: usize) -> Vec<f64> {
    assert!(sigma > 0.0 && n >= 1);
    let log_w: Vec<f64> = (1..=n).map(|k| log_weight(sigma, k)).collect();
    let top = log_w[0];
    let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|x| x / sum).collect()
}

fn log_weight(sigma: f64, k: usize) -> f64 {
    let k = k as f64;
    -(k * k) / (2.0 * sigma * sigma)
}

/// Draws `count` distinct 0-based ranks, each successive draw proportional to
/// the half-normal weight among the ranks left. Implemented as Gumbel top-k
/// in log space so tiny scales do not underflow.
pub fn draw_ranks<R: Rng + ?Sized>(sigma: f64, n: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut keys: Vec<(f64, usize)> = (0..n)
        .map(|i| {
            let u: f64 = rng.random();
            let gumbel = -(-u.ln()).ln();
            (log_weight(sigma, i + 1) + gumbel, i)
        })
        .collect();
    keys.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut ranks: Vec<usize> = keys.into_iter().take(count).map(|(_, i)| i).collect();
    ranks.sort_unstable();
    ranks
}

/// 0-based ranks selected for subset `s` of a table with `len` entries whose
/// empty set sits at 0-based rank `empty`.
pub fn select_ranks<R: Rng + ?Sized>(
    s: usize,
    cfg: &SamplingConfig,
    len: usize,
    empty: usize,
    rng: &mut R,
) -> Vec<usize> {
    let count = cfg.subset_size(len);
    let mut ranks: Vec<usize> = if s <= 1 {
        let mut r: Vec<usize> = (0..count).collect();
        r.push(len - 1);
        r
    } else {
        draw_ranks(cfg.sigma_for(len), len, count, rng)
    };
    ranks.push(empty);
    ranks.sort_unstable();
    ranks.dedup();
    ranks
}

/// Samples one node's table for subset `s`.
pub fn sample_node_subset<R: Rng + ?Sized>(
    s: usize,
    cfg: &SamplingConfig,
    table: &NodeScoreTable,
    rng: &mut R,
) -> Result<NodeScoreTable> {
    cfg.validate()?;
    let ranks = select_ranks(s, cfg, table.len(), table.empty_rank() - 1, rng);
    let entries = ranks.into_iter().map(|r| table.entries()[r].clone()).collect();
    NodeScoreTable::new(table.node(), entries)
}

/// Per-node RNG seed for subset `s`; independent of scheduling.
pub fn node_seed(base_seed: u64, s: usize, node: usize) -> u64 {
    base_seed ^ splitmix64(splitmix64(s as u64) ^ (node as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples every node for subset `s`.
pub fn sample_score_table(s: usize, cfg: &SamplingConfig, table: &ScoreTable, base_seed: u64) -> Result<ScoreTable> {
    let tables = table
        .tables()
        .iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(node_seed(base_seed, s, t.node()));
            sample_node_subset(s, cfg, t, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    ScoreTable::new(tables, Some(table.names().to_vec()))
}

/// Number of subsets needed so the sampled combinations match the full count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredM {
    pub value: f64,
    /// The true value exceeds the `f64` range.
    pub saturated: bool,
}

/// `m = 1 / p^n`.
pub fn required_m(p: f64, n: u32) -> Result<RequiredM> {
    if !(p > 0.0 && p <= 1.0) || n == 0 {
        return Err(Error::InvalidConfig(format!("required m needs 0 < p <= 1 and n >= 1, got p={p}, n={n}")));
    }
    let value = (-(n as f64) * p.ln()).exp();
    Ok(RequiredM { value, saturated: value.is_infinite() })
}

/// Log-scale combination counts of sampled and full tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinationCounts {
    /// `log(m) + Σ log(p · N_i)`
    pub log_sampled: f64,
    /// `Σ log N_i`
    pub log_full: f64,
}

pub fn subset_combinations(p: f64, m: u64, table: &ScoreTable) -> CombinationCounts {
    let log_full: f64 = table.tables().iter().map(|t| (t.len() as f64).ln()).sum();
    let log_sampled = (m as f64).ln() + table.tables().iter().map(|t| (p * t.len() as f64).ln()).sum::<f64>();
    CombinationCounts { log_sampled, log_full }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ParentSet, ScoredParentSet};

    fn linear_table(node: usize, n_entries: usize, empty_last: bool) -> NodeScoreTable {
        let empty_at = if empty_last { n_entries - 1 } else { 0 };
        let mut singles = (0..).filter(|&v| v != node);
        let entries = (0..n_entries)
            .map(|k| {
                let parents = if k == empty_at {
                    ParentSet::empty()
                } else {
                    ParentSet::new(vec![singles.next().unwrap()]).unwrap()
                };
                ScoredParentSet::new(parents, -(k as f64))
            })
            .collect();
        NodeScoreTable::new(node, entries).unwrap()
    }

    #[test]
    fn weights_basic() {
        assert_eq!(half_normal_weights(3.0, 1), vec![1.0]);
        let w = half_normal_weights(2.5, 20);
        for k in 1..=20usize {
            let expected = (-((k * k) as f64 - 1.0) / (2.0 * 2.5 * 2.5)).exp();
            assert!((w[k - 1] / w[0] - expected).abs() < 1e-12);
        }
        let big = half_normal_weights(1000.0, 10_000);
        assert!(big.windows(2).all(|p| p[0] > p[1]));
        assert!((big.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strategy_one_truncates() {
        let t = linear_table(0, 10, true);
        let cfg = SamplingConfig::new(0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ranks = select_ranks(1, &cfg, 10, t.empty_rank() - 1, &mut rng);
        assert_eq!(ranks, vec![0, 1, 9]);
    }

    #[test]
    fn strategy_one_forces_empty_set() {
        let t = linear_table(0, 10, false);
        assert_eq!(t.empty_rank(), 1);
        let cfg = SamplingConfig::new(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let sub = sample_node_subset(1, &cfg, &t, &mut rng).unwrap();
        assert_eq!(sub.len(), 4);
        assert!(sub.entries().iter().any(|e| e.parents.is_empty()));
    }

    #[test]
    fn full_rate_keeps_everything() {
        let t = linear_table(3, 17, true);
        let cfg = SamplingConfig::new(1.0).unwrap();
        for s in 1..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
            assert_eq!(sample_node_subset(s, &cfg, &t, &mut rng).unwrap(), t);
        }
    }

    #[test]
    fn tiny_sigma_takes_top_ranks() {
        let cfg = SamplingConfig { p: 0.2, sigma: SigmaRule::Fixed(1e-6) };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ranks = select_ranks(2, &cfg, 30, 29, &mut rng);
        assert_eq!(ranks, vec![0, 1, 2, 3, 4, 5, 29]);
    }

    #[test]
    fn subset_size_rounding() {
        let cfg = SamplingConfig::new(0.1).unwrap();
        assert_eq!(cfg.subset_size(30), 3);
        assert_eq!(cfg.subset_size(31), 4);
        assert_eq!(cfg.subset_size(1), 1);
        assert_eq!(cfg.subset_size(5), 1);
    }

    #[test]
    fn required_m_values() {
        assert_eq!(required_m(0.5, 1).unwrap().value, 2.0);
        assert_eq!(required_m(1.0, 50).unwrap().value, 1.0);
        let m = required_m(0.98, 100).unwrap().value;
        assert!((m - 0.98f64.powi(-100)).abs() < 1e-9);
        assert!((m - 7.5404).abs() < 1e-4);
        assert!(required_m(0.01, 1000).unwrap().saturated);
        assert!(required_m(0.0, 3).is_err());
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(SamplingConfig::new(0.0).is_err());
        assert!(SamplingConfig::new(1.5).is_err());
    }
}
