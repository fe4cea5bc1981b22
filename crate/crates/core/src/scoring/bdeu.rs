use statrs::function::gamma::ln_gamma;

use super::counts::{check_indices, CountGrid};
use crate::error::{Error, Result};
use crate::model::{Dataset, ParentSet};

/// BDeu local score of `child` given `parents`, natural log, without the
/// structure-prior term.
///
/// `q` is the full product of parent arities. Configurations with no
/// observations contribute exactly zero and are skipped.
pub fn bdeu_local_score(data: &Dataset, child: usize, parents: &ParentSet, ess: f64) -> Result<f64> {
    if !(ess > 0.0 && ess.is_finite()) {
        return Err(Error::InvalidEss(ess));
    }
    check_indices(data, child, parents)?;
    let arities = data.arities();
    let r = arities[child] as f64;
    let q: f64 = parents.members().iter().map(|&p| arities[p] as f64).product();

    let overflow = || Error::ScoreOverflow { child, parents: parents.members().to_vec() };
    let alpha_j = ess / q;
    let alpha_jk = alpha_j / r;
    if alpha_jk.is_nan() || alpha_jk <= 0.0 || !q.is_finite() {
        return Err(overflow());
    }
    let lg_alpha_j = ln_gamma(alpha_j);
    let lg_alpha_jk = ln_gamma(alpha_jk);

    let grid = CountGrid::build(data, child, parents);
    let mut score = 0.0;
    grid.for_each_observed(|counts| {
        let n_ij: u32 = counts.iter().sum();
        score += lg_alpha_j - ln_gamma(n_ij as f64 + alpha_j);
        for &n_ijk in counts {
            if n_ijk > 0 {
                score += ln_gamma(n_ijk as f64 + alpha_jk) - lg_alpha_jk;
            }
        }
    });
    if score.is_finite() {
        Ok(score)
    } else {
        Err(overflow())
    }
}
