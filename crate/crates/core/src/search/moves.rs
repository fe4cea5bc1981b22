use rand::Rng;

use crate::error::{Error, Result};
use crate::model::Ordering;

/// Exchanges positions `i` and `i + 1`.
pub fn swap_adjacent(o: &Ordering, i: usize) -> Result<Ordering> {
    let n = o.len();
    if i + 1 >= n {
        return Err(Error::PositionOutOfRange { position: i, len: n });
    }
    let mut seq = o.sequence().to_vec();
    seq.swap(i, i + 1);
    Ok(Ordering::from_vec_unchecked(seq))
}

/// Removes the element at `from` and reinserts it so that it ends up at `to`.
pub fn insert_move(o: &Ordering, from: usize, to: usize) -> Result<Ordering> {
    let n = o.len();
    for p in [from, to] {
        if p >= n {
            return Err(Error::PositionOutOfRange { position: p, len: n });
        }
    }
    let mut seq = o.sequence().to_vec();
    let v = seq.remove(from);
    seq.insert(to, v);
    Ok(Ordering::from_vec_unchecked(seq))
}

/// Order crossover keeping `a[lo..=hi]` in place and filling the remaining
/// positions, left to right, with the other elements in `b`'s order.
pub fn crossover_with_slice(a: &Ordering, b: &Ordering, lo: usize, hi: usize) -> Result<Ordering> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::LengthMismatch(n, b.len()));
    }
    if lo > hi || hi >= n {
        return Err(Error::PositionOutOfRange { position: hi, len: n });
    }
    let mut in_slice = vec![false; n];
    for &v in &a.sequence()[lo..=hi] {
        in_slice[v] = true;
    }
    let mut fill = b.sequence().iter().copied().filter(|&v| !in_slice[v]);
    let seq =
        (0..n)
            .map(|i| {
                if (lo..=hi).contains(&i) {
                    a.sequence()[i]
                } else {
                    fill.next().expect("fill covers the complement")
                }
            })
            .collect();
    Ok(Ordering::from_vec_unchecked(seq))
}

/// OX1 crossover with a uniformly random slice of `a`.
pub fn crossover<R: Rng + ?Sized>(a: &Ordering, b: &Ordering, rng: &mut R) -> Result<Ordering> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::LengthMismatch(n, b.len()));
    }
    if n == 0 {
        return Ok(a.clone());
    }
    let i = rng.random_range(0..n);
    let j = rng.random_range(0..n);
    crossover_with_slice(a, b, i.min(j), i.max(j))
}

/// Each position is, with probability `rate`, moved to a uniformly random
/// position.
pub fn mutate<R: Rng + ?Sized>(o: &Ordering, rate: f64, rng: &mut R) -> Ordering {
    let n = o.len();
    let mut seq = o.sequence().to_vec();
    if rate <= 0.0 || n < 2 {
        return o.clone();
    }
    let rate = rate.min(1.0);
    for i in 0..n {
        if rng.random_bool(rate) {
            let to = rng.random_range(0..n);
            let v = seq.remove(i);
            seq.insert(to, v);
        }
    }
    Ordering::from_vec_unchecked(seq)
}

pub fn random_ordering<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Ordering {
    use rand::seq::SliceRandom;
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    Ordering::from_vec_unchecked(seq)
}
