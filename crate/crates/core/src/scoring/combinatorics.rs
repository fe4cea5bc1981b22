//! Exact counting of candidate parent sets and labelled DAGs.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Parent sets per node when every subset of the other `n - 1` variables up
/// to size `d` is a candidate.
pub fn cps_per_node(n: u64, d: u64) -> BigUint {
    (0..=d).map(|k| binomial(n - 1, k)).sum()
}

/// Total candidate parent sets over all `n` nodes: `n * sum_{k<=d} C(n-1, k)`.
pub fn max_cps_count(n: u64, d: u64) -> Result<BigUint> {
    if d >= n {
        return Err(Error::InvalidIndegree { max_indegree: d as usize, num_vars: n as usize });
    }
    Ok(cps_per_node(n, d) * n)
}

/// Number of labelled DAGs on `n` nodes via Robinson's recurrence
/// `a(n) = sum_{i=1}^{n} (-1)^{i+1} C(n,i) 2^{i(n-i)} a(n-i)`, `a(0) = 1`.
pub fn count_dags(n: u64) -> BigUint {
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n {
        let mut total = BigInt::zero();
        for i in 1..=m {
            let term = BigInt::from(binomial(m, i)) * (BigInt::one() << (i * (m - i)) as usize) * &a[(m - i) as usize];
            if i % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        a.push(total);
    }
    a.pop().and_then(|v| v.to_biguint()).expect("DAG counts are positive")
}

/// Renders `value` in scientific notation rounded half-up to `sig` significant
/// figures, e.g. `(1.62, 7)` as the pair `("1.62", 7)`.
pub fn significant_figures(value: &BigUint, sig: usize) -> (String, usize) {
    assert!(sig >= 1);
    let digits = value.to_str_radix(10);
    if digits.len() <= sig {
        let exp = digits.len() - 1;
        let mut m = digits.clone();
        m.extend(std::iter::repeat_n('0', sig - digits.len()));
        return (insert_point(&m), exp);
    }
    let mut exp = digits.len() - 1;
    let head: BigUint = digits[..sig].parse().expect("decimal digits");
    let round_up = digits.as_bytes()[sig] >= b'5';
    let mut head = if round_up { head + 1u32 } else { head };
    let mut head_digits = head.to_str_radix(10);
    if head_digits.len() > sig {
        // 9.99.. rounded up to 10.0..
        head /= 10u32;
        head_digits = head.to_str_radix(10);
        exp += 1;
    }
    (insert_point(&head_digits), exp)
}

fn insert_point(d: &str) -> String {
    if d.len() == 1 {
        d.to_string()
    } else {
        format!("{}.{}", &d[..1], &d[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cps_spot_values() {
        assert_eq!(max_cps_count(10, 1).unwrap(), BigUint::from(100u32));
        assert_eq!(max_cps_count(50, 2).unwrap(), BigUint::from(61_300u32));
        assert_eq!(max_cps_count(100, 3).unwrap(), BigUint::from(16_180_000u32));
        let big = max_cps_count(10_000, 5).unwrap();
        assert_eq!(significant_figures(&big, 3), ("8.33".to_string(), 21));
    }

    #[test]
    fn cps_rejects_large_indegree() {
        assert!(max_cps_count(3, 3).is_err());
        assert!(max_cps_count(3, 2).is_ok());
    }

    #[test]
    fn dag_counts() {
        let expected = [1u64, 1, 3, 25, 543, 29281, 3781503];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(count_dags(n as u64), BigUint::from(e), "n = {n}");
        }
    }

    #[test]
    fn rounding_carries() {
        let v = BigUint::from(99_960u32);
        assert_eq!(significant_figures(&v, 3), ("1.00".to_string(), 5));
        assert_eq!(significant_figures(&BigUint::from(7u32), 3), ("7.00".to_string(), 0));
        assert_eq!(significant_figures(&BigUint::from(100u32), 3), ("1.00".to_string(), 2));
    }
}
