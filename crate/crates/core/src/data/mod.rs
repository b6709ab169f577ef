//! Partially labeled datasets, synthetic generators and fold splitting.

mod blobs;
mod flip;
mod kfold;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng;

use rand::seq::SliceRandom;
use rand::Rng as _;

pub use blobs::{gen_gaussian_blobs, BlobSpec};
pub use flip::{
    ambiguity_degree_analytic, ambiguity_degree_estimate, distractor, gen_partial_labels,
    AmbiguityEstimate, FlipKind, FlipSpec,
};
pub use kfold::{kfold_split, Fold};

/// An `n x K` boolean matrix; row `i` is the candidate set `S_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateMasks {
    rows: usize,
    k: usize,
    bits: Vec<bool>,
}

impl CandidateMasks {
    pub fn new(rows: usize, k: usize) -> Self {
        Self { rows, k, bits: vec![false; rows * k] }
    }

    /// Builds masks from per-row candidate index lists.
    pub fn from_sets<S: AsRef<[usize]>>(k: usize, sets: &[S]) -> Result<Self> {
        let mut m = Self::new(sets.len(), k);
        for (i, s) in sets.iter().enumerate() {
            for &label in s.as_ref() {
                if label >= k {
                    return Err(Error::contract(format!("row {i}: label {label} >= K = {k}")));
                }
                m.insert(i, label);
            }
        }
        Ok(m)
    }

    /// One-hot masks, `S_i = {y_i}`.
    pub fn singletons(k: usize, labels: &[usize]) -> Result<Self> {
        let sets: Vec<[usize; 1]> = labels.iter().map(|&y| [y]).collect();
        Self::from_sets(k, &sets)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.k..(i + 1) * self.k]
    }

    #[inline]
    pub fn contains(&self, i: usize, label: usize) -> bool {
        self.bits[i * self.k + label]
    }

    #[inline]
    pub fn insert(&mut self, i: usize, label: usize) {
        self.bits[i * self.k + label] = true;
    }

    /// `|S_i|`.
    pub fn set_size(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&b| b).count()
    }

    /// Ascending candidate indices of row `i`.
    pub fn labels(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j)
    }

    /// First row with no candidate, if any.
    pub fn first_empty_row(&self) -> Option<usize> {
        (0..self.rows).find(|&i| !self.row(i).contains(&true))
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut bits = Vec::with_capacity(indices.len() * self.k);
        for &i in indices {
            bits.extend_from_slice(self.row(i));
        }
        Self { rows: indices.len(), k: self.k, bits }
    }

    pub fn mean_set_size(&self) -> f64 {
        if self.rows == 0 {
            return 0.0;
        }
        self.bits.iter().filter(|&&b| b).count() as f64 / self.rows as f64
    }
}

/// Features, candidate sets and (optionally) the hidden true labels.
///
/// Construction enforces `S_i != {}` and, when labels are present, `y_i in S_i`.
/// A mini-batch is simply a [`PllDataset`] built with [`PllDataset::select`].
#[derive(Debug, Clone, PartialEq)]
pub struct PllDataset {
    features: Matrix,
    masks: CandidateMasks,
    true_labels: Option<Vec<usize>>,
}

impl PllDataset {
    pub fn new(
        features: Matrix,
        masks: CandidateMasks,
        true_labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if features.rows() != masks.rows() {
            return Err(Error::shape(format!(
                "{} feature rows but {} mask rows",
                features.rows(),
                masks.rows()
            )));
        }
        if masks.num_labels() == 0 {
            return Err(Error::contract("K must be >= 1"));
        }
        if let Some(i) = masks.first_empty_row() {
            return Err(Error::contract(format!("row {i} has an empty candidate set")));
        }
        if let Some(labels) = &true_labels {
            if labels.len() != masks.rows() {
                return Err(Error::shape("true label count differs from row count"));
            }
            for (i, &y) in labels.iter().enumerate() {
                if y >= masks.num_labels() || !masks.contains(i, y) {
                    return Err(Error::contract(format!(
                        "row {i}: true label {y} is not in its candidate set"
                    )));
                }
            }
        }
        Ok(Self { features, masks, true_labels })
    }

    /// Fully supervised dataset: every candidate set is the singleton `{y}`.
    pub fn supervised(features: Matrix, k: usize, labels: Vec<usize>) -> Result<Self> {
        let masks = CandidateMasks::singletons(k, &labels)?;
        Self::new(features, masks, Some(labels))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.features.rows()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.masks.num_labels()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn masks(&self) -> &CandidateMasks {
        &self.masks
    }

    pub fn true_labels(&self) -> Option<&[usize]> {
        self.true_labels.as_deref()
    }

    pub fn is_labeled(&self) -> bool {
        self.true_labels.is_some()
    }

    /// Same features and candidate sets with the true labels dropped.
    pub fn without_labels(&self) -> Self {
        Self { true_labels: None, ..self.clone() }
    }

    /// Replaces the candidate sets, re-checking the invariants.
    pub fn with_masks(&self, masks: CandidateMasks) -> Result<Self> {
        Self::new(self.features.clone(), masks, self.true_labels.clone())
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(indices),
            masks: self.masks.select_rows(indices),
            true_labels: self
                .true_labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }
}

/// The same features with supervised labels drawn uniformly from `0..K`, independently of
/// the features, from the `(seed, "relabel", 0)` stream.
pub fn random_relabel(data: &PllDataset, seed: u64) -> Result<PllDataset> {
    let k = data.num_labels();
    let mut rng = rng::stream(seed, "relabel", 0);
    let labels = (0..data.len()).map(|_| rng.random_range(0..k)).collect();
    PllDataset::supervised(data.features.clone(), k, labels)
}

/// The first `m` entries of a permutation of `0..n` drawn from `(seed, "subset", index)`.
/// Equal `(seed, index)` give nested subsets as `m` grows.
pub fn subset_indices(n: usize, m: usize, seed: u64, index: u64) -> Result<Vec<usize>> {
    if m > n {
        return Err(Error::config(format!("cannot draw {m} of {n} examples")));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::stream(seed, "subset", index));
    perm.truncate(m);
    Ok(perm)
}
