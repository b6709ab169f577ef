use naivepll_core::rng::derive_seed;
use naivepll_core::{kfold_split, stats, train, PllDataset, TrainConfig};

use super::{describe_train, fit_dims, par_units};
use crate::error::{Error, Result};
use crate::table::{describe, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    pub train: TrainConfig,
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl CvConfig {
    /// 5 repeats of 10-fold cross-validation.
    pub fn new(train: TrainConfig) -> Self {
        Self { train, k: 10, repeats: 5, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldResult {
    pub repeat: usize,
    pub fold: usize,
    pub seed: u64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvSummary {
    pub mean: f64,
    /// Sample standard deviation over all repeat x fold runs.
    pub std: f64,
    pub folds: Vec<FoldResult>,
}

impl CvSummary {
    pub fn to_table(&self, cfg: &CvConfig) -> Table {
        let mut pairs = vec![
            ("experiment", "cv".to_owned()),
            ("seed", cfg.seed.to_string()),
            ("k", cfg.k.to_string()),
            ("repeats", cfg.repeats.to_string()),
        ];
        pairs.extend(describe_train(&cfg.train));
        pairs.extend([("mean_accuracy", self.mean.to_string()), ("std", self.std.to_string())]);
        let mut t = Table::new(describe(&pairs), &["repeat", "fold", "seed", "accuracy"]);
        for f in &self.folds {
            t.push(vec![f.repeat.into(), f.fold.into(), f.seed.into(), f.accuracy.into()]);
        }
        t
    }
}

/// Trains on the candidate sets of `k - 1` folds and scores accuracy (`1 - Err`) against
/// the true labels of the held-out fold. Fold `j` of repeat `r` is unit `r * k + j` and
/// trains with seed `derive_seed(seed, "cv", unit)`.
pub fn run_cv_benchmark(data: &PllDataset, cfg: &CvConfig) -> Result<CvSummary> {
    if !data.is_labeled() {
        return Err(Error::config("cross-validation accuracy needs a labeled dataset (labeled=1)"));
    }
    let folds = kfold_split(data.len(), cfg.k, cfg.repeats, cfg.seed)?;
    let base = fit_dims(&cfg.train, data);
    base.validate()?;
    let results = par_units(folds.len(), |unit| {
        let fold = &folds[unit];
        let mut tc = base.clone();
        tc.seed = derive_seed(cfg.seed, "cv", unit as u64);
        let (_, recs) = train(&tc, &data.select(&fold.train), &data.select(&fold.test))?;
        let last = recs.last().expect("training records the final epoch");
        Ok(FoldResult { repeat: fold.repeat, fold: fold.fold, seed: tc.seed, accuracy: 1.0 - last.test_err })
    })?;
    let acc: Vec<f64> = results.iter().map(|f| f.accuracy).collect();
    Ok(CvSummary { mean: stats::mean(&acc), std: stats::std_dev(&acc), folds: results })
}
