//! Mini-batch training by minimizing a partial-label surrogate, with periodic evaluation.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::data::PllDataset;
use crate::error::{Error, Result};
use crate::losses::{
    avg_log_loss, cc_risk, classification_error, cross_entropy, generalization_gap, naive_loss,
    partial_zero_one_risk, CC_MAX_LABELS,
};
use crate::matrix::argmax_rows;
use crate::nn::{init_model_scaled, Mode, ModelParams, ModelSpec};
use crate::optim::{sgd_step, YogiConfig, YogiState};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Deep naive loss, `-log` of the candidate-set probability mass.
    Naive,
    /// Classic naive model, mean log-probability over the candidates.
    AvgLog,
    /// Cross-entropy against the true labels; only meaningful as a supervised reference.
    CrossEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerKind {
    Yogi(YogiConfig),
    Sgd { lr: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub model: ModelSpec,
    pub loss: LossKind,
    pub optimizer: OptimizerKind,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Evaluate every this many epochs; the final epoch is always evaluated.
    pub eval_every: usize,
    /// Multiplier on the initial weight scale.
    pub init_gain: f64,
    /// Stop at the first evaluation whose training naive loss is below this value.
    pub fit_threshold: Option<f64>,
}

impl TrainConfig {
    /// Naive loss, Yogi defaults, batch 128, 200 epochs, evaluation every 5 epochs.
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            loss: LossKind::Naive,
            optimizer: OptimizerKind::Yogi(YogiConfig::default()),
            batch_size: 128,
            epochs: 200,
            seed: 0,
            eval_every: 5,
            init_gain: 1.0,
            fit_threshold: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.batch_size < 2 {
            return Err(Error::config("batch_size must be >= 2 for batch norm"));
        }
        if self.epochs < 1 {
            return Err(Error::config("epochs must be >= 1"));
        }
        if self.eval_every < 1 {
            return Err(Error::config("eval_every must be >= 1"));
        }
        if !(self.init_gain > 0.0 && self.init_gain.is_finite()) {
            return Err(Error::config("init_gain must be finite and > 0"));
        }
        if self.fit_threshold.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::config("fit_threshold must be > 0"));
        }
        match self.optimizer {
            OptimizerKind::Yogi(c) => c.validate(),
            OptimizerKind::Sgd { lr } if !(lr >= 0.0 && lr.is_finite()) => {
                Err(Error::config("sgd learning rate must be finite and >= 0"))
            }
            OptimizerKind::Sgd { .. } => Ok(()),
        }
    }
}

/// One evaluation snapshot. Training-set quantities are computed over the whole training
/// set in inference mode, not averaged over the epoch's batches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    pub epoch: usize,
    pub train_naive_loss: f64,
    pub train_avg_log_loss: f64,
    /// `None` when `K` is outside `2..=52`.
    pub train_cc_risk: Option<f64>,
    pub train_partial_risk: f64,
    pub test_err: f64,
    pub test_partial_risk: f64,
    pub test_cc_risk: Option<f64>,
    /// `|test_err - train_partial_risk|`.
    pub gap: f64,
}

fn cc_if_defined(probs: &crate::Matrix, set: &PllDataset) -> Result<Option<f64>> {
    let k = set.num_labels();
    if (2..=CC_MAX_LABELS).contains(&k) {
        cc_risk(probs, set.masks(), k).map(Some)
    } else {
        Ok(None)
    }
}

/// Metrics of `params` on a training set and a labeled evaluation set.
pub fn evaluate(
    params: &ModelParams,
    train_set: &PllDataset,
    eval_set: &PllDataset,
    epoch: usize,
) -> Result<MetricsRecord> {
    let (train_logits, train_probs) = params.infer(train_set.features())?;
    let train_pred = argmax_rows(&train_logits);
    let (eval_logits, eval_probs) = params.infer(eval_set.features())?;
    let eval_pred = argmax_rows(&eval_logits);

    let train_partial_risk = partial_zero_one_risk(&train_pred, train_set.masks());
    let test_err = classification_error(&eval_pred, eval_set.true_labels())?;
    Ok(MetricsRecord {
        epoch,
        train_naive_loss: naive_loss(&train_probs, train_set.masks())?.0,
        train_avg_log_loss: avg_log_loss(&train_probs, train_set.masks())?.0,
        train_cc_risk: cc_if_defined(&train_probs, train_set)?,
        train_partial_risk,
        test_err,
        test_partial_risk: partial_zero_one_risk(&eval_pred, eval_set.masks()),
        test_cc_risk: cc_if_defined(&eval_probs, eval_set)?,
        gap: generalization_gap(test_err, train_partial_risk),
    })
}

/// Shuffled mini-batches of `0..n`. A final batch of a single example is merged into the
/// previous one so batch norm always sees at least two rows.
pub fn epoch_batches(n: usize, batch_size: usize, rng: &mut rng::Rng) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut batches: Vec<Vec<usize>> = perm.chunks(batch_size).map(<[usize]>::to_vec).collect();
    if batches.len() > 1 && batches.last().is_some_and(|b| b.len() < 2) {
        let tail = batches.pop().expect("non-empty");
        batches.last_mut().expect("non-empty").extend(tail);
    }
    batches
}

enum Optimizer {
    Yogi(YogiState),
    Sgd(f64),
}

/// Trains a fresh model on `train_set` and records metrics against `eval_set`.
///
/// Initialization uses the `(seed, "init", 0)` stream and epoch `e` is shuffled by
/// `(seed, "shuffle", e)`, so the whole run is a deterministic function of the inputs.
/// The returned model is the final-epoch model, in inference mode. With a fit threshold
/// the final epoch is the first evaluated one that reaches it.
pub fn train(
    config: &TrainConfig,
    train_set: &PllDataset,
    eval_set: &PllDataset,
) -> Result<(ModelParams, Vec<MetricsRecord>)> {
    config.validate()?;
    if train_set.dim() != config.model.input_dim || eval_set.dim() != config.model.input_dim {
        return Err(Error::shape("dataset dimension differs from the model input"));
    }
    if train_set.num_labels() != config.model.output_dim
        || eval_set.num_labels() != config.model.output_dim
    {
        return Err(Error::shape("dataset K differs from the model output"));
    }
    if train_set.len() < 2 {
        return Err(Error::contract("training needs at least two examples"));
    }
    if !eval_set.is_labeled() {
        return Err(Error::contract("the evaluation set must carry true labels"));
    }
    if config.loss == LossKind::CrossEntropy && !train_set.is_labeled() {
        return Err(Error::contract("cross-entropy training needs true labels"));
    }

    let mut params = init_model_scaled(&config.model, config.seed, config.init_gain)?;
    let mut optimizer = match config.optimizer {
        OptimizerKind::Yogi(c) => Optimizer::Yogi(YogiState::new(&params, c)?),
        OptimizerKind::Sgd { lr } => Optimizer::Sgd(lr),
    };
    let mut records = Vec::with_capacity(config.epochs / config.eval_every + 1);

    for epoch in 1..=config.epochs {
        params.set_mode(Mode::Training);
        let mut shuffle = rng::stream(config.seed, "shuffle", epoch as u64);
        for (b, idx) in epoch_batches(train_set.len(), config.batch_size, &mut shuffle)
            .iter()
            .enumerate()
        {
            let wrap = |e: Error| Error::Training { epoch, batch: b, source: Box::new(e) };
            let batch = train_set.select(idx);
            let fwd = params.forward(batch.features()).map_err(wrap)?;
            let (_, dlogits) = match config.loss {
                LossKind::Naive => naive_loss(&fwd.probs, batch.masks()),
                LossKind::AvgLog => avg_log_loss(&fwd.probs, batch.masks()),
                LossKind::CrossEntropy => {
                    cross_entropy(&fwd.probs, batch.true_labels().expect("checked above"))
                }
            }
            .map_err(wrap)?;
            let cache = fwd.cache.as_ref().expect("training-mode forward keeps a cache");
            let grads = params.backward(cache, &dlogits).map_err(wrap)?;
            match &mut optimizer {
                Optimizer::Yogi(state) => state.step(&mut params, &grads),
                Optimizer::Sgd(lr) => sgd_step(&mut params, &grads, *lr),
            }
            .map_err(wrap)?;
        }
        if epoch % config.eval_every == 0 || epoch == config.epochs {
            params.set_mode(Mode::Inference);
            let rec = evaluate(&params, train_set, eval_set, epoch)
                .map_err(|e| Error::Training { epoch, batch: 0, source: Box::new(e) })?;
            records.push(rec);
            if config.fit_threshold.is_some_and(|t| rec.train_naive_loss < t) {
                break;
            }
        }
    }
    params.set_mode(Mode::Inference);
    Ok((params, records))
}
