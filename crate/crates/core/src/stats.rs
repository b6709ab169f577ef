//! Small summary statistics used by the experiment aggregations.

use alloc::vec::Vec;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (`n - 1` denominator); 0 for a single value.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return if xs.is_empty() { f64::NAN } else { 0.0 };
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    libm::sqrt(ss / (xs.len() - 1) as f64)
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Mid-ranks (1-based) of the pooled sample; ties share their average rank.
fn pooled_ranks(pooled: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = alloc::vec![0.0; pooled.len()];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = avg;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    (ranks, tie_term)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Mann-Whitney `U` of the first sample.
    pub u: f64,
    pub z: f64,
    /// One-sided p-value for "the first sample tends to be smaller".
    pub p_value: f64,
}

/// One-sided Wilcoxon rank-sum (Mann-Whitney) test of `H1: x < y`, normal approximation
/// with tie correction and a 0.5 continuity correction.
pub fn rank_sum_less(x: &[f64], y: &[f64]) -> RankSumTest {
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (ranks, tie_term) = pooled_ranks(&pooled);
    let r1: f64 = ranks[..x.len()].iter().sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let n = n1 + n2;
    let mu = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if !(var > 0.0) {
        return RankSumTest { u, z: 0.0, p_value: 1.0 };
    }
    let z = (u - mu + 0.5) / libm::sqrt(var);
    // Phi(z) = erfc(-z / sqrt 2) / 2
    let p_value = 0.5 * libm::erfc(-z / core::f64::consts::SQRT_2);
    RankSumTest { u, z, p_value }
}
