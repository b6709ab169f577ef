//! Repeated-training experiments.
//!
//! Every experiment is split into independent units (a fold, a repeat at one size, a
//! sweep point, a run). Unit `i` derives its seeds from `(master seed, tag, i)`, units
//! run on the rayon pool, and results are gathered in unit order, so the output does not
//! depend on scheduling or thread count.
//!
//! The model input and output sizes in a [`TrainConfig`] are overwritten from the data.

mod ambiguity;
mod complexity;
mod cv;
mod gap;

pub use ambiguity::{pair_metrics, run_ambiguity_sweep, AmbiguityRun, AmbiguitySweep, AmbiguitySweepConfig};
pub use complexity::{
    run_complexity_experiment, ComplexityConfig, ComplexityReport, ComplexityRun, Condition,
};
pub use cv::{run_cv_benchmark, CvConfig, CvSummary, FoldResult};
pub use gap::{run_gap_curve, GapCurve, GapCurveConfig, GapRun};

use naivepll_core::{stats, BlobSpec, FlipKind, FlipSpec, LossKind, OptimizerKind, PllDataset, TrainConfig};
use rayon::prelude::*;

use crate::error::Result;
use crate::table::Cell;

pub(crate) fn par_units<T: Send>(
    count: usize,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    (0..count).into_par_iter().map(f).collect()
}

pub(crate) fn fit_dims(train: &TrainConfig, data: &PllDataset) -> TrainConfig {
    let mut cfg = train.clone();
    cfg.model.input_dim = data.dim();
    cfg.model.output_dim = data.num_labels();
    cfg
}

/// `mean` and `std` cells for a column of per-run values.
pub(crate) fn mean_std(xs: &[f64]) -> [Cell; 2] {
    [Cell::Float(stats::mean(xs)), Cell::Float(stats::std_dev(xs))]
}

pub fn describe_train(cfg: &TrainConfig) -> Vec<(&'static str, String)> {
    let hidden = cfg.model.hidden_dims.iter().map(usize::to_string).collect::<Vec<_>>().join(":");
    let mut out = vec![
        ("hidden", hidden),
        ("elu_alpha", cfg.model.elu_alpha.to_string()),
        ("bn_epsilon", cfg.model.bn_epsilon.to_string()),
        ("bn_momentum", cfg.model.bn_momentum.to_string()),
        (
            "loss",
            match cfg.loss {
                LossKind::Naive => "naive",
                LossKind::AvgLog => "avg-log",
                LossKind::CrossEntropy => "cross-entropy",
            }
            .to_owned(),
        ),
    ];
    match cfg.optimizer {
        OptimizerKind::Yogi(y) => out.extend([
            ("optimizer", "yogi".to_owned()),
            ("lr", y.lr.to_string()),
            ("beta1", y.beta1.to_string()),
            ("beta2", y.beta2.to_string()),
            ("opt_eps", y.eps.to_string()),
            ("bias_correction", y.bias_correction.to_string()),
        ]),
        OptimizerKind::Sgd { lr } => {
            out.extend([("optimizer", "sgd".to_owned()), ("lr", lr.to_string())])
        }
    }
    out.extend([
        ("batch_size", cfg.batch_size.to_string()),
        ("epochs", cfg.epochs.to_string()),
        ("eval_every", cfg.eval_every.to_string()),
        ("init_gain", cfg.init_gain.to_string()),
        ("fit_threshold", cfg.fit_threshold.map_or("none".to_owned(), |t| t.to_string())),
    ]);
    out
}

pub fn describe_blobs(b: &BlobSpec) -> Vec<(&'static str, String)> {
    vec![
        ("classes", b.classes.to_string()),
        ("dim", b.dim.to_string()),
        ("radius", b.radius.to_string()),
        ("sigma", b.sigma.to_string()),
        ("n_per_class", b.n_per_class.to_string()),
    ]
}

pub fn describe_flip(f: &FlipSpec) -> Vec<(&'static str, String)> {
    let kind = match f.kind {
        FlipKind::Uniform => "uniform",
        FlipKind::CoupledDistractor => "coupled",
    };
    vec![("flip", kind.to_owned()), ("q", f.q.to_string()), ("c", f.c.to_string())]
}
