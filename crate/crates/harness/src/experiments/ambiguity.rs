use naivepll_core::data::distractor;
use naivepll_core::rng::derive_seed;
use naivepll_core::{
    classification_error, gen_gaussian_blobs, gen_partial_labels, train, BlobSpec, FlipSpec,
    TrainConfig,
};

use super::{describe_blobs, describe_train, fit_dims, mean_std, par_units};
use crate::error::{Error, Result};
use crate::table::{describe, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguitySweepConfig {
    pub blobs: BlobSpec,
    /// Inclusion probability of the non-distractor wrong labels.
    pub q: f64,
    pub test_per_class: usize,
    /// Distractor probabilities `c = gamma`; sorted and deduplicated before use.
    pub gammas: Vec<f64>,
    pub repeats: usize,
    pub train: TrainConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbiguityRun {
    pub gamma: f64,
    pub repeat: usize,
    pub err: f64,
    pub pair_confusion: f64,
    pub pair_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguitySweep {
    /// The sorted, deduplicated sweep points.
    pub gammas: Vec<f64>,
    /// Gamma-major, then repeat.
    pub runs: Vec<AmbiguityRun>,
}

/// `(pair confusion, pair accuracy)` of predictions against true labels.
///
/// Pair accuracy is the fraction of predictions inside `{y, d(y)}`. Pair confusion is,
/// among those, the fraction equal to the distractor `d(y)`; it is NaN when no prediction
/// lands in the pair.
pub fn pair_metrics(predictions: &[usize], labels: &[usize], k: usize) -> (f64, f64) {
    assert_eq!(predictions.len(), labels.len());
    let (mut in_pair, mut confused) = (0usize, 0usize);
    for (&p, &y) in predictions.iter().zip(labels) {
        if p == distractor(y, k) && p != y {
            in_pair += 1;
            confused += 1;
        } else if p == y {
            in_pair += 1;
        }
    }
    let conf = if in_pair == 0 { f64::NAN } else { confused as f64 / in_pair as f64 };
    (conf, in_pair as f64 / labels.len().max(1) as f64)
}

impl AmbiguitySweep {
    pub fn runs_at(&self, gamma: f64) -> impl Iterator<Item = &AmbiguityRun> {
        self.runs.iter().filter(move |r| r.gamma == gamma)
    }

    pub fn to_table(&self, cfg: &AmbiguitySweepConfig) -> Table {
        let mut pairs = vec![
            ("experiment", "ambiguity-sweep".to_owned()),
            ("seed", cfg.seed.to_string()),
            ("flip", "coupled".to_owned()),
            ("q", cfg.q.to_string()),
        ];
        pairs.extend(describe_blobs(&cfg.blobs));
        pairs.extend([
            ("test_per_class", cfg.test_per_class.to_string()),
            ("repeats", cfg.repeats.to_string()),
        ]);
        pairs.extend(describe_train(&cfg.train));
        let mut t = Table::new(
            describe(&pairs),
            &[
                "gamma",
                "err_mean",
                "err_std",
                "pair_confusion_mean",
                "pair_confusion_std",
                "pair_accuracy_mean",
                "pair_accuracy_std",
            ],
        );
        for &g in &self.gammas {
            let col = |f: fn(&AmbiguityRun) -> f64| self.runs_at(g).map(f).collect::<Vec<_>>();
            let mut row = vec![g.into()];
            row.extend(mean_std(&col(|r| r.err)));
            row.extend(mean_std(&col(|r| r.pair_confusion)));
            row.extend(mean_std(&col(|r| r.pair_accuracy)));
            t.push(row);
        }
        t
    }
}

/// Trains under the coupled-distractor process with `c = gamma` for every sweep point.
///
/// Repeat `r` uses the same features, flip seed and training seed at every gamma, so the
/// points of one repeat differ only in their candidate sets; with `gamma = 0` and `q = 0`
/// the run is exactly the supervised one. The test set is shared by all runs.
pub fn run_ambiguity_sweep(cfg: &AmbiguitySweepConfig) -> Result<AmbiguitySweep> {
    if let Some(g) = cfg.gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(Error::config(format!("gamma {g} is outside [0, 1]")));
    }
    let mut gammas = cfg.gammas.clone();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    FlipSpec::coupled(cfg.q, 0.0).validate()?;
    let test_spec = BlobSpec { n_per_class: cfg.test_per_class, ..cfg.blobs.clone() };
    let test = gen_gaussian_blobs(&test_spec, derive_seed(cfg.seed, "sweep-test", 0))?;
    let test_labels = test.true_labels().expect("generated data is labeled");
    let k = cfg.blobs.classes;
    let base = fit_dims(&cfg.train, &test);
    base.validate()?;

    let reps = cfg.repeats;
    let runs = par_units(gammas.len() * reps, |unit| {
        let (gi, repeat) = (unit / reps, unit % reps);
        let gamma = gammas[gi];
        let r = repeat as u64;
        let clean = gen_gaussian_blobs(&cfg.blobs, derive_seed(cfg.seed, "sweep-data", r))?;
        let data = gen_partial_labels(
            &clean,
            &FlipSpec::coupled(cfg.q, gamma),
            derive_seed(cfg.seed, "sweep-flip", r),
        )?;
        let mut tc = base.clone();
        tc.seed = derive_seed(cfg.seed, "sweep-train", r);
        let (params, _) = train(&tc, &data, &test)?;
        let pred = params.predict(test.features())?;
        let err = classification_error(&pred, Some(test_labels))?;
        let (pair_confusion, pair_accuracy) = pair_metrics(&pred, test_labels, k);
        Ok(AmbiguityRun { gamma, repeat, err, pair_confusion, pair_accuracy })
    })?;
    Ok(AmbiguitySweep { gammas, runs })
}
