//! Test-only oracles and fixtures. Nothing here calls into the scoring or
//! search code it is used to check.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::OnceLock;

use psminobs::model::{Dataset, NodeScoreTable, ParentSet, ScoreTable, ScoredParentSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// `ln Γ(x)` for `x > 0`: shift up with `Γ(x) = Γ(x+1)/x`, then Stirling's
/// series with five correction terms.
pub fn ln_gamma(mut x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    while x < 15.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Straight-line BDeu local score over every parent configuration, observed
/// or not.
pub fn bdeu_oracle(rows: &[Vec<usize>], arities: &[usize], child: usize, parents: &[usize], ess: f64) -> f64 {
    let r = arities[child];
    let q: usize = parents.iter().map(|&p| arities[p]).product();
    let mut counts = vec![vec![0usize; r]; q];
    for row in rows {
        let mut j = 0;
        for &p in parents {
            j = j * arities[p] + row[p];
        }
        counts[j][row[child]] += 1;
    }
    let a_j = ess / q as f64;
    let a_jk = ess / (q * r) as f64;
    let mut total = 0.0;
    for cfg in &counts {
        let n_ij: usize = cfg.iter().sum();
        total += ln_gamma(a_j) - ln_gamma(n_ij as f64 + a_j);
        for &n_ijk in cfg {
            total += ln_gamma(n_ijk as f64 + a_jk) - ln_gamma(a_jk);
        }
    }
    total
}

/// Random dataset in which later columns partly copy earlier ones, so that
/// parent sets actually matter.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize, rows: usize, max_arity: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let arities: Vec<usize> = (0..n).map(|_| rng.random_range(2..=max_arity)).collect();
    let data = (0..rows)
        .map(|_| {
            let mut row = Vec::with_capacity(n);
            for v in 0..n {
                let code = if v > 0 && rng.random_bool(0.6) {
                    row[rng.random_range(0..v)] % arities[v]
                } else {
                    rng.random_range(0..arities[v])
                };
                row.push(code);
            }
            row
        })
        .collect();
    (data, arities)
}

pub fn dataset(rows: Vec<Vec<usize>>, arities: Vec<usize>) -> Dataset {
    let n = arities.len();
    Dataset::new(n, rows, Some(arities), None).unwrap()
}

fn mask_of(members: &[usize]) -> u32 {
    members.iter().fold(0, |m, &p| m | (1 << p))
}

fn acyclic_masks(parents: &[u32]) -> bool {
    let n = parents.len();
    let mut placed = 0u32;
    for _ in 0..n {
        let ready = (0..n).find(|&v| placed & (1 << v) == 0 && parents[v] & !placed == 0);
        match ready {
            Some(v) => placed |= 1 << v,
            None => return false,
        }
    }
    true
}

/// Every labelled DAG on `n <= 5` nodes as per-node parent bitmasks, found by
/// testing all loop-free adjacency matrices.
pub fn all_dags(n: usize) -> &'static [Vec<u32>] {
    static CACHE: [OnceLock<Vec<Vec<u32>>>; 6] = [const { OnceLock::new() }; 6];
    assert!(n <= 5);
    CACHE[n].get_or_init(|| {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|c| (0..n).filter(move |&p| p != c).map(move |p| (c, p))).collect();
        let mut out = Vec::new();
        for bits in 0u64..(1u64 << slots.len()) {
            let mut parents = vec![0u32; n];
            for (i, &(c, p)) in slots.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    parents[c] |= 1 << p;
                }
            }
            if acyclic_masks(&parents) {
                out.push(parents);
            }
        }
        out
    })
}

/// Best total over every DAG whose parent sets all appear in `table`.
pub fn exhaustive_best(table: &ScoreTable) -> f64 {
    let lookup: Vec<HashMap<u32, f64>> = table
        .tables()
        .iter()
        .map(|t| t.entries().iter().map(|e| (mask_of(e.parents.members()), e.score)).collect())
        .collect();
    all_dags(table.num_vars())
        .iter()
        .filter_map(|dag| dag.iter().enumerate().map(|(i, m)| lookup[i].get(m).copied()).sum::<Option<f64>>())
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn subsets_up_to(others: &[usize], d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &v in others {
        let extended: Vec<Vec<usize>> = out
            .iter()
            .filter(|s| s.len() < d)
            .map(|s| {
                let mut s = s.clone();
                s.push(v);
                s
            })
            .collect();
        out.extend(extended);
    }
    out
}

/// Random table: each non-empty parent set of size `<= d` kept with
/// probability `density`; scores occasionally tie.
pub fn random_score_table<R: Rng>(rng: &mut R, n: usize, d: usize, density: f64) -> ScoreTable {
    let tables = (0..n)
        .map(|node| {
            let others: Vec<usize> = (0..n).filter(|&v| v != node).collect();
            let mut entries = Vec::new();
            for s in subsets_up_to(&others, d) {
                if !s.is_empty() && !rng.random_bool(density) {
                    continue;
                }
                let raw: f64 = rng.random_range(-60.0..-1.0);
                let score = if rng.random_bool(0.3) { raw.round() } else { raw };
                entries.push(ScoredParentSet::new(ParentSet::new(s).unwrap(), score));
            }
            NodeScoreTable::new(node, entries).unwrap()
        })
        .collect();
    ScoreTable::new(tables, None).unwrap()
}

pub const ASIA_NAMES: [&str; 4] = ["Asia", "Tub", "Smoke", "Lung"];

/// The published four-variable pruning example: per child, the eight
/// parent sets with their scores.
pub fn asia_rows() -> Vec<Vec<(Vec<usize>, f64)>> {
    let (a, t, s, l) = (0, 1, 2, 3);
    vec![
        vec![
            (vec![], -2.531),
            (vec![t], -2.381),
            (vec![l], -2.727),
            (vec![s], -3.032),
            (vec![t, l], -2.758),
            (vec![t, s], -2.948),
            (vec![s, l], -3.790),
            (vec![t, s, l], -3.302),
        ],
        vec![
            (vec![], -7.126),
            (vec![l], -5.292),
            (vec![a], -6.976),
            (vec![s], -7.426),
            (vec![s, l], -3.790),
            (vec![a, l], -5.323),
            (vec![a, s], -7.342),
            (vec![a, s, l], -3.302),
        ],
        vec![
            (vec![], -36.201),
            (vec![t], -36.502),
            (vec![a], -36.702),
            (vec![l], -37.760),
            (vec![t, l], -36.258),
            (vec![a, t], -37.069),
            (vec![a, l], -38.823),
            (vec![a, t, l], -36.803),
        ],
        vec![
            (vec![], -16.133),
            (vec![t], -14.299),
            (vec![a], -16.329),
            (vec![s], -17.692),
            (vec![t, s], -14.056),
            (vec![a, t], -14.676),
            (vec![a, s], -18.450),
            (vec![a, t, s], -14.410),
        ],
    ]
}

/// The sets marked as retained in the same example.
pub fn asia_retained() -> Vec<Vec<Vec<usize>>> {
    vec![
        vec![vec![], vec![1]],
        vec![vec![], vec![3], vec![0], vec![2, 3], vec![0, 2, 3]],
        vec![vec![]],
        vec![vec![], vec![1], vec![1, 2]],
    ]
}

pub fn asia_table() -> ScoreTable {
    let tables = asia_rows()
        .into_iter()
        .enumerate()
        .map(|(node, row)| {
            let entries = row.into_iter().map(|(p, s)| ScoredParentSet::new(ParentSet::new(p).unwrap(), s)).collect();
            NodeScoreTable::new(node, entries).unwrap()
        })
        .collect();
    ScoreTable::new(tables, Some(ASIA_NAMES.iter().map(|s| s.to_string()).collect())).unwrap()
}

/// Audio-train raw best scores at the eight half-hour marks (p = 10%,
/// m = 10): the baseline first, then subsets 1..10.
pub fn audio_baseline() -> [f64; 8] {
    [-620010.1, -620008.8, -620005.1, -620005.1, -620005.1, -620005.1, -620005.1, -620005.1]
}

pub fn audio_workers() -> [[f64; 8]; 10] {
    [
        [-620373.9, -620373.9, -620372.7, -620005.1, -620005.1, -619992.9, -619990.9, -619990.9],
        [-619990.9, -619989.0, -619989.0, -619989.0, -619989.0, -619989.0, -619989.0, -619989.0],
        [-620025.1, -620023.7, -620013.9, -620013.9, -620013.9, -620013.9, -620013.9, -620013.9],
        [-619993.1; 8],
        [-620025.7; 8],
        [-620007.6, -620007.6, -620003.0, -619990.9, -619990.9, -619990.9, -619990.9, -619990.9],
        [-619996.6, -619996.6, -619992.9, -619990.9, -619990.9, -619990.9, -619990.9, -619990.9],
        [-619995.4, -619994.1, -619994.1, -619994.1, -619994.1, -619994.1, -619994.1, -619994.1],
        [-620012.2, -620012.2, -620012.2, -620001.4, -620001.4, -620001.4, -620001.4, -620001.4],
        [-620014.2; 8],
    ]
}

/// Published per-interval Δ in permille for the same run, subsets 1..10
/// followed by the highest-DAG row.
pub fn audio_delta_permille() -> [[f64; 8]; 11] {
    [
        [-0.587, -0.589, -0.593, 0.0, 0.0, 0.020, 0.023, 0.023],
        [0.031, 0.032, 0.026, 0.026, 0.026, 0.026, 0.026, 0.026],
        [-0.024, -0.024, -0.014, -0.014, -0.014, -0.014, -0.014, -0.014],
        [0.027, 0.025, 0.019, 0.019, 0.019, 0.019, 0.019, 0.019],
        [-0.025, -0.027, -0.033, -0.033, -0.033, -0.033, -0.033, -0.033],
        [0.004, 0.002, 0.003, 0.023, 0.023, 0.023, 0.023, 0.023],
        [0.022, 0.020, 0.020, 0.023, 0.023, 0.023, 0.023, 0.023],
        [0.024, 0.024, 0.018, 0.018, 0.018, 0.018, 0.018, 0.018],
        [-0.003, -0.005, -0.011, 0.006, 0.006, 0.006, 0.006, 0.006],
        [-0.007, -0.009, -0.015, -0.015, -0.015, -0.015, -0.015, -0.015],
        [0.031, 0.032, 0.026, 0.026, 0.026, 0.026, 0.026, 0.026],
    ]
}

/// Snapshot series for the run above, one snapshot per half hour.
pub fn audio_snapshots() -> (Vec<psminobs::Snapshot>, Vec<psminobs::Snapshot>) {
    let at = |k: usize| 1800.0 * (k + 1) as f64;
    let baseline = audio_baseline()
        .iter()
        .enumerate()
        .map(|(k, &score)| psminobs::Snapshot { worker: 0, elapsed: at(k), score })
        .collect();
    let run = audio_workers()
        .iter()
        .enumerate()
        .flat_map(|(w, series)| {
            series.iter().enumerate().map(move |(k, &score)| psminobs::Snapshot {
                worker: w + 1,
                elapsed: at(k),
                score,
            })
        })
        .collect();
    (baseline, run)
}

/// Published three-figure grid of CPS totals, rows by node count and columns
/// by in-degree 1..=5.
pub fn published_cps_grid() -> [(u64, [&'static str; 5]); 7] {
    [
        (10, ["1.00e2", "4.60e2", "1.30e3", "2.56e3", "3.82e3"]),
        (50, ["2.50e3", "6.13e4", "9.83e5", "1.16e7", "1.07e8"]),
        (100, ["1.00e4", "4.95e5", "1.62e7", "3.93e8", "7.54e9"]),
        (500, ["2.50e5", "6.24e7", "1.04e10", "1.29e12", "1.28e14"]),
        (1000, ["1.00e6", "4.99e8", "1.66e11", "4.14e13", "8.25e15"]),
        (5000, ["2.50e7", "6.25e10", "1.04e14", "1.30e17", "1.29e20"]),
        (10000, ["1.00e8", "4.99e11", "1.67e15", "4.16e18", "8.33e21"]),
    ]
}

/// Forward sample of a random discrete network: node `v` takes up to
/// `max_parents` parents among earlier nodes and a skewed conditional table
/// per parent configuration.
pub fn synthetic_network<R: Rng>(rng: &mut R, n: usize, rows: usize, max_parents: usize) -> Dataset {
    let arities: Vec<usize> = (0..n).map(|_| rng.random_range(2..=4)).collect();
    let mut parents: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut cpts: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n);
    for v in 0..n {
        let k = rng.random_range(0..=max_parents.min(v));
        let mut pa: Vec<usize> = (0..v).collect();
        pa.shuffle(rng);
        pa.truncate(k);
        pa.sort_unstable();
        let q: usize = pa.iter().map(|&p| arities[p]).product();
        let table = (0..q)
            .map(|_| {
                let w: Vec<f64> = (0..arities[v]).map(|_| rng.random::<f64>().powi(3) + 0.02).collect();
                let sum: f64 = w.iter().sum();
                w.into_iter().map(|x| x / sum).collect()
            })
            .collect();
        parents.push(pa);
        cpts.push(table);
    }
    let data = (0..rows)
        .map(|_| {
            let mut row = vec![0usize; n];
            for v in 0..n {
                let config = parents[v].iter().fold(0, |acc, &p| acc * arities[p] + row[p]);
                let u: f64 = rng.random();
                let mut acc = 0.0;
                row[v] = arities[v] - 1;
                for (code, &pr) in cpts[v][config].iter().enumerate() {
                    acc += pr;
                    if u < acc {
                        row[v] = code;
                        break;
                    }
                }
            }
            row
        })
        .collect();
    Dataset::new(n, data, Some(arities), None).unwrap()
}
