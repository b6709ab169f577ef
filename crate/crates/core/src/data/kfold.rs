use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub repeat: usize,
    pub fold: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Repeated k-fold splits of `0..n`.
///
/// Each repeat shuffles the indices with the `(seed, "kfold", repeat)` stream and cuts the
/// permutation into `k` contiguous folds whose sizes differ by at most one (the first
/// `n mod k` folds get the extra index). Index lists are sorted ascending. Output order is
/// repeat-major.
pub fn kfold_split(n: usize, k: usize, repeats: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::config("k-fold needs k >= 2"));
    }
    if k > n {
        return Err(Error::config(format!("cannot cut {n} examples into {k} folds")));
    }
    let mut out = Vec::with_capacity(repeats * k);
    for repeat in 0..repeats {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng::stream(seed, "kfold", repeat as u64));
        let (base, extra) = (n / k, n % k);
        let mut start = 0;
        let mut bounds = Vec::with_capacity(k);
        for f in 0..k {
            let len = base + usize::from(f < extra);
            bounds.push((start, start + len));
            start += len;
        }
        for (fold, &(lo, hi)) in bounds.iter().enumerate() {
            let mut test = perm[lo..hi].to_vec();
            let mut train: Vec<usize> = perm[..lo].iter().chain(&perm[hi..]).copied().collect();
            test.sort_unstable();
            train.sort_unstable();
            out.push(Fold { repeat, fold, train, test });
        }
    }
    Ok(out)
}
