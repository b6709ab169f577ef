//! Loss and risk functionals for partial-label learning.
//!
//! The differentiable losses take softmax probabilities and return the gradient with
//! respect to the *logits* that produced them, so the softmax Jacobian is folded in here
//! and the network's backward pass starts from `dL/dlogits`.

use alloc::format;
use alloc::vec::Vec;

use crate::data::CandidateMasks;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Probability floor applied inside every logarithm.
pub const PROB_FLOOR: f64 = 1e-12;

/// Largest `K` accepted by [`cc_risk`]; keeps `2^(K-1) - 1` exact in an `f64` mantissa.
pub const CC_MAX_LABELS: usize = 52;

fn check_shapes(probs: &Matrix, masks: &CandidateMasks) -> Result<()> {
    if probs.rows() != masks.rows() || probs.cols() != masks.num_labels() {
        return Err(Error::shape(format!(
            "probs are {}x{}, masks are {}x{}",
            probs.rows(),
            probs.cols(),
            masks.rows(),
            masks.num_labels()
        )));
    }
    if probs.rows() == 0 {
        return Err(Error::contract("loss over an empty batch"));
    }
    if let Some(i) = masks.first_empty_row() {
        return Err(Error::contract(format!("row {i} has an empty candidate set")));
    }
    Ok(())
}

/// Deep naive loss: the mean over rows of `-log(sum_{k in S_i} p_ik)`, with the inner sum
/// floored at [`PROB_FLOOR`].
///
/// For `s = sum_{k in S} p_k` the logit gradient of one row is `p_j (1 - [j in S] / s)`,
/// divided by the batch size. When the floor is active the row contributes no gradient.
pub fn naive_loss(probs: &Matrix, masks: &CandidateMasks) -> Result<(f64, Matrix)> {
    check_shapes(probs, masks)?;
    let b = probs.rows() as f64;
    let mut grad = Matrix::zeros(probs.rows(), probs.cols());
    let mut total = 0.0;
    for i in 0..probs.rows() {
        let p = probs.row(i);
        let in_set = masks.row(i);
        let s: f64 = p.iter().zip(in_set).filter(|(_, &m)| m).map(|(v, _)| v).sum();
        total -= libm::log(s.max(PROB_FLOOR));
        if s >= PROB_FLOOR {
            for (j, g) in grad.row_mut(i).iter_mut().enumerate() {
                let member = if in_set[j] { 1.0 } else { 0.0 };
                *g = p[j] * (1.0 - member / s) / b;
            }
        }
    }
    Ok((total / b, grad))
}

/// Averaged log-likelihood objective of the classic naive model: the mean over rows of
/// `-(1 / |S_i|) sum_{k in S_i} log p_ik`, each probability floored at [`PROB_FLOOR`].
///
/// Row gradient: `p_j * (n_live / |S|) - [j in S, p_j above floor] / |S|` where `n_live`
/// counts the unfloored members.
pub fn avg_log_loss(probs: &Matrix, masks: &CandidateMasks) -> Result<(f64, Matrix)> {
    check_shapes(probs, masks)?;
    let b = probs.rows() as f64;
    let mut grad = Matrix::zeros(probs.rows(), probs.cols());
    let mut total = 0.0;
    for i in 0..probs.rows() {
        let p = probs.row(i);
        let in_set = masks.row(i);
        let size = masks.set_size(i) as f64;
        let mut row = 0.0;
        let mut live = 0.0;
        for (j, &pj) in p.iter().enumerate() {
            if in_set[j] {
                row -= libm::log(pj.max(PROB_FLOOR));
                if pj >= PROB_FLOOR {
                    live += 1.0;
                }
            }
        }
        total += row / size;
        for (j, g) in grad.row_mut(i).iter_mut().enumerate() {
            let direct = if in_set[j] && p[j] >= PROB_FLOOR { 1.0 } else { 0.0 };
            *g = (p[j] * live - direct) / size / b;
        }
    }
    Ok((total / b, grad))
}

/// Standard softmax cross-entropy against hard labels, floored like the other losses.
pub fn cross_entropy(probs: &Matrix, labels: &[usize]) -> Result<(f64, Matrix)> {
    if probs.rows() != labels.len() {
        return Err(Error::shape("one label per row is required"));
    }
    if probs.rows() == 0 {
        return Err(Error::contract("loss over an empty batch"));
    }
    let b = probs.rows() as f64;
    let mut grad = Matrix::zeros(probs.rows(), probs.cols());
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        if y >= probs.cols() {
            return Err(Error::contract(format!("label {y} out of range")));
        }
        let p = probs.row(i);
        total -= libm::log(p[y].max(PROB_FLOOR));
        if p[y] >= PROB_FLOOR {
            for (j, g) in grad.row_mut(i).iter_mut().enumerate() {
                *g = (p[j] - if j == y { 1.0 } else { 0.0 }) / b;
            }
        }
    }
    Ok((total / b, grad))
}

/// `2^(K-1) - 1`, the number of candidate sets containing a given label.
pub fn candidate_set_count(k: usize) -> Result<u64> {
    if !(2..=CC_MAX_LABELS).contains(&k) {
        return Err(Error::config(format!("cc risk needs 2 <= K <= {CC_MAX_LABELS}, got {k}")));
    }
    Ok((1u64 << (k - 1)) - 1)
}

/// Empirical classifier-consistent risk under the uniform transition matrix:
/// `-(1/B) sum_i log(sum_{k in S_i} p_ik / (2^(K-1) - 1))`.
pub fn cc_risk(probs: &Matrix, masks: &CandidateMasks, k: usize) -> Result<f64> {
    let count = candidate_set_count(k)? as f64;
    if masks.num_labels() != k {
        return Err(Error::shape("K differs from the mask width"));
    }
    check_shapes(probs, masks)?;
    let mut total = 0.0;
    for i in 0..probs.rows() {
        let s: f64 = probs
            .row(i)
            .iter()
            .zip(masks.row(i))
            .filter(|(_, &m)| m)
            .map(|(v, _)| v)
            .sum();
        total -= libm::log(s.max(PROB_FLOOR) / count);
    }
    Ok(total / probs.rows() as f64)
}

/// Upper bound of the floored CC loss, `log((2^(K-1) - 1) / PROB_FLOOR)`.
pub fn cc_loss_upper_bound(k: usize) -> Result<f64> {
    Ok(libm::log(candidate_set_count(k)? as f64 / PROB_FLOOR))
}

/// Fraction of predictions that fall outside their candidate set.
pub fn partial_zero_one_risk(predictions: &[usize], masks: &CandidateMasks) -> f64 {
    assert_eq!(predictions.len(), masks.rows(), "one prediction per row");
    if predictions.is_empty() {
        return 0.0;
    }
    let outside = predictions
        .iter()
        .enumerate()
        .filter(|&(i, &p)| p >= masks.num_labels() || !masks.contains(i, p))
        .count();
    outside as f64 / predictions.len() as f64
}

/// Misclassification rate against the true labels.
pub fn classification_error(predictions: &[usize], true_labels: Option<&[usize]>) -> Result<f64> {
    let labels =
        true_labels.ok_or_else(|| Error::contract("classification error needs true labels"))?;
    if labels.len() != predictions.len() {
        return Err(Error::shape("prediction and label counts differ"));
    }
    if labels.is_empty() {
        return Ok(0.0);
    }
    let wrong = predictions.iter().zip(labels).filter(|(p, y)| p != y).count();
    Ok(wrong as f64 / labels.len() as f64)
}

/// `|err - partial_risk|`.
pub fn generalization_gap(err: f64, partial_risk: f64) -> f64 {
    (err - partial_risk).abs()
}

/// Per-row probability mass on the candidate set, as used by the naive loss.
pub fn candidate_mass(probs: &Matrix, masks: &CandidateMasks) -> Vec<f64> {
    (0..probs.rows())
        .map(|i| {
            probs.row(i).iter().zip(masks.row(i)).filter(|(_, &m)| m).map(|(v, _)| v).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn uniform(rows: usize, k: usize) -> Matrix {
        Matrix::from_vec(rows, k, vec![1.0 / k as f64; rows * k]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn naive_loss_examples() {
        let full = CandidateMasks::from_sets(4, &[vec![0, 1, 2, 3]]).unwrap();
        close(naive_loss(&uniform(1, 4), &full).unwrap().0, 0.0, 1e-15);

        let probs = Matrix::from_rows(&[[0.1, 0.6, 0.3]]).unwrap();
        let single = CandidateMasks::from_sets(3, &[vec![1]]).unwrap();
        close(naive_loss(&probs, &single).unwrap().0, -(0.6f64).ln(), 1e-15);

        let two = CandidateMasks::from_sets(4, &[vec![0, 2]]).unwrap();
        close(naive_loss(&uniform(1, 4), &two).unwrap().0, core::f64::consts::LN_2, 1e-15);
    }

    #[test]
    fn avg_log_loss_examples() {
        let two = CandidateMasks::from_sets(4, &[vec![1, 3]]).unwrap();
        close(avg_log_loss(&uniform(1, 4), &two).unwrap().0, 1.386294, 1e-6);

        let full = CandidateMasks::from_sets(3, &[vec![0, 1, 2]]).unwrap();
        close(avg_log_loss(&uniform(1, 3), &full).unwrap().0, 1.098612, 1e-6);
        close(naive_loss(&uniform(1, 3), &full).unwrap().0, 0.0, 1e-15);

        let probs = Matrix::from_rows(&[[0.2, 0.5, 0.3]]).unwrap();
        let single = CandidateMasks::from_sets(3, &[vec![2]]).unwrap();
        assert_eq!(avg_log_loss(&probs, &single).unwrap().0, naive_loss(&probs, &single).unwrap().0);
    }

    #[test]
    fn cc_risk_examples() {
        let two = CandidateMasks::from_sets(4, &[vec![0, 2]]).unwrap();
        close(cc_risk(&uniform(1, 4), &two, 4).unwrap(), 2.639057, 1e-6);
        let full = CandidateMasks::from_sets(3, &[vec![0, 1, 2]]).unwrap();
        close(cc_risk(&uniform(1, 3), &full, 3).unwrap(), 3f64.ln(), 1e-12);
        let probs = Matrix::from_rows(&[[0.1, 0.2, 0.3, 0.4]]).unwrap();
        let m = CandidateMasks::from_sets(4, &[vec![3]]).unwrap();
        let diff = cc_risk(&probs, &m, 4).unwrap() - naive_loss(&probs, &m).unwrap().0;
        close(diff, 7f64.ln(), 1e-12);
    }

    #[test]
    fn cc_risk_rejects_bad_k() {
        let m = CandidateMasks::from_sets(1, &[vec![0]]).unwrap();
        assert!(cc_risk(&uniform(1, 1), &m, 1).is_err());
        assert!(candidate_set_count(53).is_err());
        assert_eq!(candidate_set_count(52).unwrap(), (1u64 << 51) - 1);
    }

    #[test]
    fn empty_mask_row_rejected() {
        let m = CandidateMasks::from_sets(3, &[vec![0], vec![]]).unwrap();
        assert!(matches!(naive_loss(&uniform(2, 3), &m), Err(Error::Contract(_))));
        assert!(matches!(avg_log_loss(&uniform(2, 3), &m), Err(Error::Contract(_))));
        assert!(cc_risk(&uniform(2, 3), &m, 3).is_err());
    }

    #[test]
    fn floor_bounds_loss() {
        let probs = Matrix::from_rows(&[[1.0, 0.0]]).unwrap();
        let m = CandidateMasks::from_sets(2, &[vec![1]]).unwrap();
        let (loss, grad) = naive_loss(&probs, &m).unwrap();
        close(loss, -(PROB_FLOOR).ln(), 1e-12);
        assert!(grad.is_finite());
        close(cc_loss_upper_bound(4).unwrap(), (7.0 / PROB_FLOOR).ln(), 1e-12);
    }

    #[test]
    fn zero_one_risks() {
        let m = CandidateMasks::from_sets(3, &[vec![0, 1], vec![2], vec![1], vec![0], vec![2], vec![1, 2]])
            .unwrap();
        assert_eq!(partial_zero_one_risk(&[0, 2, 1, 0, 2, 2], &m), 0.0);
        assert_eq!(partial_zero_one_risk(&[2, 0, 0, 1, 1, 0], &m), 1.0);
        assert_eq!(partial_zero_one_risk(&[0, 0, 1, 1, 2, 0], &m), 0.5);

        assert_eq!(classification_error(&[0, 1, 2], Some(&[0, 1, 2])).unwrap(), 0.0);
        assert_eq!(classification_error(&[1, 2, 0], Some(&[0, 1, 2])).unwrap(), 1.0);
        assert_eq!(classification_error(&[0, 1, 2, 0], Some(&[0, 1, 2, 3])).unwrap(), 0.25);
        assert!(classification_error(&[0], None).is_err());
    }

    #[test]
    fn gap_examples() {
        assert_eq!(generalization_gap(0.3, 0.3), 0.0);
        close(generalization_gap(0.4, 0.1), 0.3, 1e-15);
        assert_eq!(generalization_gap(0.1, 0.4), generalization_gap(0.4, 0.1));
    }
}
