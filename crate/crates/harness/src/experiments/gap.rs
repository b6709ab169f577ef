use naivepll_core::rng::derive_seed;
use naivepll_core::{
    gen_gaussian_blobs, gen_partial_labels, subset_indices, train, BlobSpec, FlipSpec,
    MetricsRecord, TrainConfig,
};

use super::{describe_blobs, describe_flip, describe_train, fit_dims, mean_std, par_units};
use crate::error::{Error, Result};
use crate::table::{describe, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct GapCurveConfig {
    /// Generator for the training pool; `n_per_class` sets the pool size.
    pub blobs: BlobSpec,
    pub flip: FlipSpec,
    /// Size of the held-out labeled test set, per class.
    pub test_per_class: usize,
    /// Strictly ascending training-set sizes.
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub train: TrainConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRun {
    pub n: usize,
    pub repeat: usize,
    pub seed: u64,
    /// Metrics of the final-epoch model.
    pub record: MetricsRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCurve {
    /// Size-major, then repeat.
    pub runs: Vec<GapRun>,
}

pub const GAP_COLUMNS: [&str; 11] = [
    "n",
    "err_mean",
    "err_std",
    "partial_risk_mean",
    "partial_risk_std",
    "gap_mean",
    "gap_std",
    "cc_risk_mean",
    "cc_risk_std",
    "naive_loss_mean",
    "naive_loss_std",
];

impl GapCurve {
    /// Mean gap per size, in size order.
    pub fn mean_gaps(&self, sizes: &[usize]) -> Vec<f64> {
        sizes
            .iter()
            .map(|&n| {
                let g: Vec<f64> =
                    self.runs.iter().filter(|r| r.n == n).map(|r| r.record.gap).collect();
                naivepll_core::stats::mean(&g)
            })
            .collect()
    }

    /// One row per size: mean and sample std over repeats of test Err, training partial
    /// risk, gap, training CC risk and training naive loss.
    pub fn to_table(&self, cfg: &GapCurveConfig) -> Table {
        let mut pairs = vec![("experiment", "gap-curve".to_owned()), ("seed", cfg.seed.to_string())];
        pairs.extend(describe_blobs(&cfg.blobs));
        pairs.extend(describe_flip(&cfg.flip));
        pairs.extend([
            ("test_per_class", cfg.test_per_class.to_string()),
            ("repeats", cfg.repeats.to_string()),
        ]);
        pairs.extend(describe_train(&cfg.train));
        let mut t = Table::new(describe(&pairs), &GAP_COLUMNS);
        for &n in &cfg.sizes {
            let rs: Vec<&MetricsRecord> =
                self.runs.iter().filter(|r| r.n == n).map(|r| &r.record).collect();
            let col = |f: fn(&MetricsRecord) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<_>>();
            let mut row = vec![n.into()];
            row.extend(mean_std(&col(|r| r.test_err)));
            row.extend(mean_std(&col(|r| r.train_partial_risk)));
            row.extend(mean_std(&col(|r| r.gap)));
            row.extend(mean_std(&col(|r| r.train_cc_risk.unwrap_or(f64::NAN))));
            row.extend(mean_std(&col(|r| r.train_naive_loss)));
            t.push(row);
        }
        t
    }
}

/// Generalization gap against training-set size.
///
/// One pool of `blobs.classes * blobs.n_per_class` partially labeled examples and one
/// labeled test set are generated up front. Repeat `r` draws a random permutation of the
/// pool and trains at every size on its first `n` entries, so the subsets of one repeat
/// are nested. Unit `(size i, repeat r)` trains with seed `derive_seed(seed, "gap", i *
/// repeats + r)`.
pub fn run_gap_curve(cfg: &GapCurveConfig) -> Result<GapCurve> {
    if cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("sizes must be strictly ascending"));
    }
    let pool = gen_gaussian_blobs(&cfg.blobs, derive_seed(cfg.seed, "gap-pool", 0))?;
    let pool = gen_partial_labels(&pool, &cfg.flip, derive_seed(cfg.seed, "gap-flip", 0))?;
    if let Some(&n) = cfg.sizes.last() {
        if n > pool.len() {
            return Err(Error::config(format!("size {n} exceeds the pool of {}", pool.len())));
        }
    }
    if cfg.sizes.first().is_some_and(|&n| n < 2) {
        return Err(Error::config("training sizes must be >= 2"));
    }
    let test_spec = BlobSpec { n_per_class: cfg.test_per_class, ..cfg.blobs.clone() };
    let test = gen_gaussian_blobs(&test_spec, derive_seed(cfg.seed, "gap-test", 0))?;
    let base = fit_dims(&cfg.train, &pool);
    base.validate()?;

    let reps = cfg.repeats;
    let runs = par_units(cfg.sizes.len() * reps, |unit| {
        let (i, repeat) = (unit / reps, unit % reps);
        let n = cfg.sizes[i];
        let idx = subset_indices(pool.len(), n, cfg.seed, repeat as u64)?;
        let mut tc = base.clone();
        tc.seed = derive_seed(cfg.seed, "gap", unit as u64);
        let (_, recs) = train(&tc, &pool.select(&idx), &test)?;
        Ok(GapRun { n, repeat, seed: tc.seed, record: *recs.last().expect("final record") })
    })?;
    Ok(GapCurve { runs })
}
