use naivepll_core::rng::derive_seed;
use naivepll_core::stats::{median, rank_sum_less, RankSumTest};
use naivepll_core::theory::lz_complexity;
use naivepll_core::{
    gen_gaussian_blobs, gen_partial_labels, random_relabel, train, BlobSpec, FlipSpec,
    TrainConfig,
};

use super::{describe_blobs, describe_flip, describe_train, fit_dims, par_units};
use crate::error::{Error, Result};
use crate::table::{describe, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Candidate sets generated around the blob labels.
    Structured,
    /// Candidate sets generated around labels drawn independently of the features.
    Randomized,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Structured => "structured",
            Condition::Randomized => "randomized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityConfig {
    pub blobs: BlobSpec,
    pub flip: FlipSpec,
    pub test_per_class: usize,
    /// Runs per condition.
    pub runs: usize,
    /// Quantization width for the complexity proxy: 4, 8 or 16.
    pub bits: u32,
    /// `epochs` is the cap; `fit_threshold` should be set so runs stop once they fit.
    pub train: TrainConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityRun {
    pub condition: Condition,
    pub run: usize,
    pub seed: u64,
    pub epochs: usize,
    /// Whether the training naive loss reached the fit threshold.
    pub fitted: bool,
    pub train_loss: f64,
    pub train_partial_risk: f64,
    /// Error on the held-out structured test set.
    pub err: f64,
    pub complexity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    /// Structured runs first, then randomized, each in run order.
    pub runs: Vec<ComplexityRun>,
    pub median_structured: f64,
    pub median_randomized: f64,
    /// One-sided rank-sum test of "structured complexity is smaller"; `None` without runs.
    pub test: Option<RankSumTest>,
}

impl ComplexityReport {
    pub fn complexities(&self, condition: Condition) -> Vec<f64> {
        self.runs.iter().filter(|r| r.condition == condition).map(|r| r.complexity as f64).collect()
    }

    pub fn to_table(&self, cfg: &ComplexityConfig) -> Table {
        let mut pairs = vec![("experiment", "complexity".to_owned()), ("seed", cfg.seed.to_string())];
        pairs.extend(describe_blobs(&cfg.blobs));
        pairs.extend(describe_flip(&cfg.flip));
        pairs.extend([
            ("test_per_class", cfg.test_per_class.to_string()),
            ("runs", cfg.runs.to_string()),
            ("bits", cfg.bits.to_string()),
        ]);
        pairs.extend(describe_train(&cfg.train));
        pairs.extend([
            ("median_structured", self.median_structured.to_string()),
            ("median_randomized", self.median_randomized.to_string()),
            ("rank_sum_p", self.test.map_or("none".to_owned(), |t| t.p_value.to_string())),
        ]);
        let mut t = Table::new(
            describe(&pairs),
            &[
                "condition",
                "run",
                "seed",
                "epochs",
                "fitted",
                "train_loss",
                "train_partial_risk",
                "err",
                "complexity",
            ],
        );
        for r in &self.runs {
            t.push(vec![
                r.condition.name().into(),
                r.run.into(),
                r.seed.into(),
                r.epochs.into(),
                r.fitted.into(),
                r.train_loss.into(),
                r.train_partial_risk.into(),
                r.err.into(),
                r.complexity.into(),
            ]);
        }
        t
    }
}

/// Fits `runs` models per condition and records the Lempel-Ziv complexity of each fit.
///
/// Both conditions share the features. The randomized condition replaces the labels with
/// uniform draws (`random_relabel`) before the same flip process builds candidate sets,
/// so its candidate sets carry no information about the features. Unit `i` (structured
/// runs are `0..runs`, randomized `runs..2 runs`) trains with seed
/// `derive_seed(seed, "complexity", i)`. Runs that hit the epoch cap without reaching
/// the fit threshold are kept and flagged `fitted = false`.
pub fn run_complexity_experiment(cfg: &ComplexityConfig) -> Result<ComplexityReport> {
    naivepll_core::theory::QuantBits::from_bits(cfg.bits)?;
    if cfg.train.fit_threshold.is_none() {
        return Err(Error::config("the complexity experiment needs a fit threshold"));
    }
    let clean = gen_gaussian_blobs(&cfg.blobs, derive_seed(cfg.seed, "complexity-data", 0))?;
    let flip_seed = derive_seed(cfg.seed, "complexity-flip", 0);
    let structured = gen_partial_labels(&clean, &cfg.flip, flip_seed)?;
    let relabeled = random_relabel(&clean, derive_seed(cfg.seed, "complexity-relabel", 0))?;
    let randomized = gen_partial_labels(&relabeled, &cfg.flip, flip_seed)?;
    let test_spec = BlobSpec { n_per_class: cfg.test_per_class, ..cfg.blobs.clone() };
    let test = gen_gaussian_blobs(&test_spec, derive_seed(cfg.seed, "complexity-test", 0))?;
    let base = fit_dims(&cfg.train, &clean);
    base.validate()?;
    let threshold = cfg.train.fit_threshold.expect("checked above");

    let runs = par_units(2 * cfg.runs, |unit| {
        let (condition, data) = if unit < cfg.runs {
            (Condition::Structured, &structured)
        } else {
            (Condition::Randomized, &randomized)
        };
        let mut tc = base.clone();
        tc.seed = derive_seed(cfg.seed, "complexity", unit as u64);
        let (params, recs) = train(&tc, data, &test)?;
        let last = recs.last().expect("final record");
        Ok(ComplexityRun {
            condition,
            run: unit % cfg.runs.max(1),
            seed: tc.seed,
            epochs: last.epoch,
            fitted: last.train_naive_loss < threshold,
            train_loss: last.train_naive_loss,
            train_partial_risk: last.train_partial_risk,
            err: last.test_err,
            complexity: lz_complexity(&params, cfg.bits)?,
        })
    })?;
    let mut report = ComplexityReport {
        runs,
        median_structured: f64::NAN,
        median_randomized: f64::NAN,
        test: None,
    };
    let (s, r) = (report.complexities(Condition::Structured), report.complexities(Condition::Randomized));
    if !s.is_empty() {
        report.median_structured = median(&s);
        report.median_randomized = median(&r);
        report.test = Some(rank_sum_less(&s, &r));
    }
    Ok(report)
}
