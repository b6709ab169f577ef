//! Partial-label generating processes `p(S | x, y)` and the ambiguity degree.
//!
//! Both processes depend on the true label only, never on `x`.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{CandidateMasks, PllDataset};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipKind {
    /// Every wrong label joins `S` independently with probability `q`.
    Uniform,
    /// The distractor `d(y) = (y + 1) mod K` joins with probability `c`, every other wrong
    /// label with probability `q`.
    CoupledDistractor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipSpec {
    pub kind: FlipKind,
    pub q: f64,
    pub c: f64,
}

impl FlipSpec {
    pub fn uniform(q: f64) -> Self {
        Self { kind: FlipKind::Uniform, q, c: 0.0 }
    }

    pub fn coupled(q: f64, c: f64) -> Self {
        Self { kind: FlipKind::CoupledDistractor, q, c }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !ok(self.q) || !ok(self.c) {
            return Err(Error::config("flip probabilities must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Probability that wrong label `other` is added when the true label is `y`.
    pub fn inclusion_probability(&self, y: usize, other: usize, k: usize) -> f64 {
        match self.kind {
            FlipKind::CoupledDistractor if other == distractor(y, k) => self.c,
            _ => self.q,
        }
    }
}

/// The designated distractor of label `y`.
#[inline]
pub fn distractor(y: usize, k: usize) -> usize {
    (y + 1) % k
}

/// Redraws every candidate set from `flip`: `S_i` always contains `y_i`, and each wrong
/// label is added by an independent Bernoulli draw taken in ascending label order from the
/// `(seed, "flip", 0)` stream.
pub fn gen_partial_labels(dataset: &PllDataset, flip: &FlipSpec, seed: u64) -> Result<PllDataset> {
    flip.validate()?;
    let labels = dataset
        .true_labels()
        .ok_or_else(|| Error::contract("generating partial labels requires true labels"))?;
    let k = dataset.num_labels();
    let mut rng = rng::stream(seed, "flip", 0);
    let mut masks = CandidateMasks::new(dataset.len(), k);
    for (i, &y) in labels.iter().enumerate() {
        masks.insert(i, y);
        for other in (0..k).filter(|&o| o != y) {
            let p = flip.inclusion_probability(y, other, k);
            if rng.random::<f64>() < p {
                masks.insert(i, other);
            }
        }
    }
    dataset.with_masks(masks)
}

/// `gamma` of the process: the largest co-occurrence probability of any wrong label.
/// Uniform flips give `q`; coupled distractors give `max(q, c)`.
pub fn ambiguity_degree_analytic(flip: &FlipSpec) -> f64 {
    match flip.kind {
        FlipKind::Uniform => flip.q,
        FlipKind::CoupledDistractor => flip.q.max(flip.c),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityEstimate {
    pub gamma: f64,
    /// `(y, y_bar)` attaining the maximum, if any pair was measurable.
    pub argmax: Option<(usize, usize)>,
    /// Classes with no examples; their pairs were skipped.
    pub skipped_classes: Vec<usize>,
}

/// Plug-in estimate of the ambiguity degree.
///
/// The supremum over instances `x` cannot be estimated from finite samples, so this
/// estimator assumes `S` depends on `y` alone: it returns the largest empirical frequency
/// with which a wrong label `y_bar` appears in `S` among examples whose true label is `y`.
pub fn ambiguity_degree_estimate(dataset: &PllDataset) -> Result<AmbiguityEstimate> {
    let labels = dataset
        .true_labels()
        .ok_or_else(|| Error::contract("estimating the ambiguity degree requires true labels"))?;
    let k = dataset.num_labels();
    let mut class_counts = vec![0usize; k];
    let mut co = vec![0usize; k * k];
    for (i, &y) in labels.iter().enumerate() {
        class_counts[y] += 1;
        for other in dataset.masks().labels(i) {
            co[y * k + other] += 1;
        }
    }
    let mut est = AmbiguityEstimate { gamma: 0.0, argmax: None, skipped_classes: Vec::new() };
    for y in 0..k {
        if class_counts[y] == 0 {
            est.skipped_classes.push(y);
            continue;
        }
        for other in (0..k).filter(|&o| o != y) {
            let f = co[y * k + other] as f64 / class_counts[y] as f64;
            if est.argmax.is_none() || f > est.gamma {
                est.gamma = f;
                est.argmax = Some((y, other));
            }
        }
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{gen_gaussian_blobs, BlobSpec};

    fn blobs(k: usize, per: usize) -> PllDataset {
        gen_gaussian_blobs(
            &BlobSpec { classes: k, dim: 2, radius: 1.0, sigma: 1.0, n_per_class: per },
            11,
        )
        .unwrap()
    }

    #[test]
    fn q_zero_gives_singletons_and_q_one_full_sets() {
        let d = blobs(4, 50);
        let none = gen_partial_labels(&d, &FlipSpec::uniform(0.0), 1).unwrap();
        assert_eq!(none.masks(), d.masks());
        let all = gen_partial_labels(&d, &FlipSpec::uniform(1.0), 1).unwrap();
        assert!((0..all.len()).all(|i| all.masks().set_size(i) == 4));
    }

    #[test]
    fn coupled_one_always_adds_distractor() {
        let d = blobs(4, 50);
        let p = gen_partial_labels(&d, &FlipSpec::coupled(0.0, 1.0), 1).unwrap();
        for (i, &y) in p.true_labels().unwrap().iter().enumerate() {
            assert_eq!(p.masks().labels(i).count(), 2);
            assert!(p.masks().contains(i, distractor(y, 4)));
        }
        let est = ambiguity_degree_estimate(&p).unwrap();
        assert_eq!(est.gamma, 1.0);
    }

    #[test]
    fn analytic_values() {
        assert_eq!(ambiguity_degree_analytic(&FlipSpec::uniform(0.3)), 0.3);
        assert_eq!(ambiguity_degree_analytic(&FlipSpec::uniform(0.0)), 0.0);
        assert_eq!(ambiguity_degree_analytic(&FlipSpec::coupled(0.2, 1.0)), 1.0);
        assert_eq!(ambiguity_degree_analytic(&FlipSpec::coupled(0.4, 0.1)), 0.4);
    }

    #[test]
    fn estimate_is_zero_for_singletons() {
        assert_eq!(ambiguity_degree_estimate(&blobs(3, 10)).unwrap().gamma, 0.0);
    }

    #[test]
    fn estimate_records_empty_classes() {
        let x = crate::Matrix::zeros(2, 1);
        let d = PllDataset::supervised(x, 3, vec![0, 0]).unwrap();
        assert_eq!(ambiguity_degree_estimate(&d).unwrap().skipped_classes, vec![1, 2]);
    }

    #[test]
    fn requires_labels() {
        let d = blobs(2, 3).without_labels();
        assert!(gen_partial_labels(&d, &FlipSpec::uniform(0.5), 0).is_err());
        assert!(ambiguity_degree_estimate(&d).is_err());
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(gen_partial_labels(&blobs(2, 3), &FlipSpec::uniform(1.5), 0).is_err());
    }
}
