//! The `naivepll` command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use naivepll_core::rng::derive_seed;
use naivepll_core::{
    gen_gaussian_blobs, gen_partial_labels, init_model, train, BlobSpec, FlipKind, FlipSpec,
    LossKind, MetricsRecord, ModelSpec, OptimizerKind, TrainConfig, YogiConfig,
};

use crate::bounds::{compute_bounds, BoundsConfig};
use crate::error::{write_file, Result};
use crate::experiments::{
    describe_train, run_ambiguity_sweep, run_complexity_experiment,
    run_cv_benchmark, run_gap_curve, AmbiguitySweepConfig, ComplexityConfig, CvConfig,
    GapCurveConfig,
};
use crate::model_file::{load_model, save_model};
use crate::plld::{load_dataset, save_dataset};
use crate::table::{describe, Table};

#[derive(Parser, Debug)]
#[command(name = "naivepll", version, about = "Deep naive partial-label learning experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a Gaussian-blobs dataset with partial labels as a PLLD file.
    Gen(GenArgs),
    /// Train one model and write its metrics trace.
    Train(TrainArgs),
    /// Repeated k-fold cross-validation on a labeled PLLD file.
    Cv(CvArgs),
    /// Generalization gap against training-set size.
    GapCurve(GapCurveArgs),
    /// Test error and pair confusion against the distractor probability.
    AmbiguitySweep(SweepArgs),
    /// Evaluate the sample-complexity and CC-risk bounds for a network.
    Bounds(BoundsArgs),
    /// Lempel-Ziv complexity of fits to structured and randomized labels.
    Complexity(ComplexityArgs),
    /// Render a result CSV as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read flag values from a `key = value` file; flags on the command line win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BlobArgs {
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub n_per_class: Option<usize>,
}

impl BlobArgs {
    pub fn apply(&self, d: BlobSpec) -> BlobSpec {
        BlobSpec {
            classes: self.classes.unwrap_or(d.classes),
            dim: self.dim.unwrap_or(d.dim),
            radius: self.radius.unwrap_or(d.radius),
            sigma: self.sigma.unwrap_or(d.sigma),
            n_per_class: self.n_per_class.unwrap_or(d.n_per_class),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipArg {
    Uniform,
    Coupled,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FlipArgs {
    /// Partial-label process.
    #[arg(long, value_enum)]
    pub flip: Option<FlipArg>,
    /// Inclusion probability of each wrong label.
    #[arg(long)]
    pub q: Option<f64>,
    /// Inclusion probability of the distractor (coupled only).
    #[arg(long)]
    pub c: Option<f64>,
}

impl FlipArgs {
    pub fn apply(&self, d: FlipSpec) -> FlipSpec {
        let kind = match self.flip {
            Some(FlipArg::Uniform) => FlipKind::Uniform,
            Some(FlipArg::Coupled) => FlipKind::CoupledDistractor,
            None => d.kind,
        };
        FlipSpec { kind, q: self.q.unwrap_or(d.q), c: self.c.unwrap_or(d.c) }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossArg {
    Naive,
    AvgLog,
    CrossEntropy,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerArg {
    Yogi,
    Sgd,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Hidden layer widths, comma-separated.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
    pub hidden: Option<Vec<usize>>,
    #[arg(long)]
    pub elu_alpha: Option<f64>,
    #[arg(long)]
    pub bn_epsilon: Option<f64>,
    #[arg(long)]
    pub bn_momentum: Option<f64>,
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    #[arg(long, value_enum)]
    pub optimizer: Option<OptimizerArg>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    /// Yogi denominator epsilon.
    #[arg(long)]
    pub opt_eps: Option<f64>,
    #[arg(long, action = ArgAction::Set)]
    pub bias_correction: Option<bool>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub eval_every: Option<usize>,
    /// Multiplier on the initial weight scale.
    #[arg(long)]
    pub init_gain: Option<f64>,
    /// Stop once the training naive loss drops below this value.
    #[arg(long)]
    pub fit_threshold: Option<f64>,
}

impl ModelArgs {
    pub fn apply(&self, d: TrainConfig) -> TrainConfig {
        let mut c = d;
        if let Some(h) = &self.hidden {
            c.model.hidden_dims = h.clone();
        }
        c.model.elu_alpha = self.elu_alpha.unwrap_or(c.model.elu_alpha);
        c.model.bn_epsilon = self.bn_epsilon.unwrap_or(c.model.bn_epsilon);
        c.model.bn_momentum = self.bn_momentum.unwrap_or(c.model.bn_momentum);
        if let Some(l) = self.loss {
            c.loss = match l {
                LossArg::Naive => LossKind::Naive,
                LossArg::AvgLog => LossKind::AvgLog,
                LossArg::CrossEntropy => LossKind::CrossEntropy,
            };
        }
        let mut yogi = match c.optimizer {
            OptimizerKind::Yogi(y) => y,
            OptimizerKind::Sgd { lr } => YogiConfig { lr, ..YogiConfig::default() },
        };
        yogi.lr = self.lr.unwrap_or(yogi.lr);
        yogi.beta1 = self.beta1.unwrap_or(yogi.beta1);
        yogi.beta2 = self.beta2.unwrap_or(yogi.beta2);
        yogi.eps = self.opt_eps.unwrap_or(yogi.eps);
        yogi.bias_correction = self.bias_correction.unwrap_or(yogi.bias_correction);
        let sgd = matches!(c.optimizer, OptimizerKind::Sgd { .. });
        c.optimizer = match (self.optimizer, sgd) {
            (Some(OptimizerArg::Sgd), _) | (None, true) => OptimizerKind::Sgd { lr: yogi.lr },
            _ => OptimizerKind::Yogi(yogi),
        };
        c.batch_size = self.batch_size.unwrap_or(c.batch_size);
        c.epochs = self.epochs.unwrap_or(c.epochs);
        c.eval_every = self.eval_every.unwrap_or(c.eval_every);
        c.init_gain = self.init_gain.unwrap_or(c.init_gain);
        if self.fit_threshold.is_some() {
            c.fit_threshold = self.fit_threshold;
        }
        c
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub blobs: BlobArgs,
    #[command(flatten)]
    pub flip: FlipArgs,
    /// Write the true labels.
    #[arg(long, action = ArgAction::Set, default_value_t = true)]
    pub labeled: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Training set (PLLD).
    #[arg(long)]
    pub data: PathBuf,
    /// Labeled evaluation set (PLLD); defaults to the training set.
    #[arg(long)]
    pub eval: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Metrics CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the final parameters as a snapshot.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CvArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GapCurveArgs {
    #[command(flatten)]
    pub blobs: BlobArgs,
    #[command(flatten)]
    pub flip: FlipArgs,
    #[arg(long)]
    pub test_per_class: Option<usize>,
    /// Training-set sizes, comma-separated and ascending.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub blobs: BlobArgs,
    /// Inclusion probability of the non-distractor wrong labels.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub test_per_class: Option<usize>,
    /// Distractor probabilities, comma-separated.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
    pub gammas: Option<Vec<f64>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Parameter snapshot; without it a freshly initialized network is used.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Dataset (PLLD) supplying `n` and the input radius.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Input size of the initialized network.
    #[arg(long, default_value_t = 10)]
    pub input_dim: usize,
    /// Hidden widths of the initialized network.
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "512,256")]
    pub hidden: Vec<usize>,
    /// Label count of the initialized network.
    #[arg(long, default_value_t = 4)]
    pub classes: usize,
    /// Natarajan dimension; defaults to the P log2 P proxy.
    #[arg(long)]
    pub d_h: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Lipschitz constant of the loss.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Loss upper bound; defaults to the floored CC loss bound.
    #[arg(long)]
    pub m: Option<f64>,
    /// Sample size when no dataset is given.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Input norm bound when no dataset is given.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub blobs: BlobArgs,
    #[command(flatten)]
    pub flip: FlipArgs,
    #[arg(long)]
    pub test_per_class: Option<usize>,
    /// Runs per condition.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Quantization width: 4, 8 or 16.
    #[arg(long)]
    pub bits: Option<u32>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Result CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// SVG output.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

/// Default training setup; the model sizes are filled in from the data.
pub fn default_train() -> TrainConfig {
    TrainConfig::new(ModelSpec::new(1, 1))
}

/// Blobs used by `gen`: 4 well-separated classes in 10 dimensions, 2000 points.
pub fn gen_blob_defaults() -> BlobSpec {
    BlobSpec { classes: 4, dim: 10, radius: 10.0, sigma: 0.5, n_per_class: 500 }
}

/// `gap-curve` defaults: 6 doubling sizes from 250 to 8000, 10 repeats, 60 epochs.
pub fn gap_curve_defaults(seed: u64) -> GapCurveConfig {
    let mut train = default_train();
    train.epochs = 60;
    train.eval_every = 60;
    GapCurveConfig {
        blobs: BlobSpec { classes: 4, dim: 100, radius: 4.0, sigma: 1.0, n_per_class: 4000 },
        flip: FlipSpec::uniform(0.3),
        test_per_class: 1000,
        sizes: vec![250, 500, 1000, 2000, 4000, 8000],
        repeats: 10,
        train,
        seed,
    }
}

/// `ambiguity-sweep` defaults: separable blobs, 1000 training points, 40 repeats,
/// 50 epochs. At `gamma = 1` a single run picks the label or the distractor per class
/// region, so the pair confusion is only near 1/2 on average over many repeats.
pub fn ambiguity_defaults(seed: u64) -> AmbiguitySweepConfig {
    let mut train = default_train();
    train.epochs = 50;
    train.eval_every = 50;
    AmbiguitySweepConfig {
        blobs: BlobSpec { classes: 4, dim: 10, radius: 10.0, sigma: 0.5, n_per_class: 250 },
        q: 0.0,
        test_per_class: 250,
        gammas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        repeats: 40,
        train,
        seed,
    }
}

/// `complexity` defaults: 1000 overlapping-blob points, 20 runs per condition, 8-bit
/// quantization, training until the naive loss is below 0.05 (at most 1000 epochs).
pub fn complexity_defaults(seed: u64) -> ComplexityConfig {
    let mut train = default_train();
    train.epochs = 1000;
    train.eval_every = 5;
    train.fit_threshold = Some(0.05);
    ComplexityConfig {
        blobs: BlobSpec { classes: 4, dim: 10, radius: 4.0, sigma: 1.0, n_per_class: 250 },
        flip: FlipSpec::uniform(0.3),
        test_per_class: 250,
        runs: 20,
        bits: 8,
        train,
        seed,
    }
}

fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

fn accepts(sub: &str, key: &str) -> bool {
    command().find_subcommand(sub).is_some_and(|s| {
        s.get_arguments().any(|a| a.get_long() == Some(key))
    })
}

/// Parses `args` (program name first), honouring `--config`.
pub fn parse(args: Vec<OsString>) -> anyhow::Result<Cli> {
    let args = crate::config::expand_args(args, accepts)?;
    let matches = command().try_get_matches_from(args)?;
    Ok(Cli::from_arg_matches(&matches)?)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Train(a) => cmd_train(&a),
        Command::Cv(a) => cmd_cv(&a),
        Command::GapCurve(a) => cmd_gap_curve(&a),
        Command::AmbiguitySweep(a) => cmd_sweep(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Complexity(a) => cmd_complexity(&a),
        Command::Plot(a) => crate::plot::emit_plot(&a.input, &a.out),
    }
}

/// Entry point used by the binary: parse, run, and map errors to an exit code.
pub fn main_with(args: Vec<OsString>) -> std::process::ExitCode {
    let cli = match parse(args) {
        Ok(c) => c,
        Err(e) => match e.downcast::<clap::Error>() {
            Ok(ce) => ce.exit(),
            Err(e) => {
                eprintln!("error: {e:#}");
                return std::process::ExitCode::from(2);
            }
        },
    };
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", anyhow::Error::from(e));
            std::process::ExitCode::FAILURE
        }
    }
}

fn cmd_gen(a: &GenArgs) -> Result<()> {
    let blobs = a.blobs.apply(gen_blob_defaults());
    let flip = a.flip.apply(FlipSpec::uniform(0.0));
    let clean = gen_gaussian_blobs(&blobs, derive_seed(a.common.seed, "gen-blobs", 0))?;
    let data = gen_partial_labels(&clean, &flip, derive_seed(a.common.seed, "gen-flip", 0))?;
    let data = if a.labeled { data } else { data.without_labels() };
    save_dataset(&data, &a.out)?;
    println!(
        "wrote {} examples (d={}, K={}, mean |S| = {:.4}) to {}",
        data.len(),
        data.dim(),
        data.num_labels(),
        data.masks().mean_set_size(),
        a.out.display()
    );
    Ok(())
}

fn metrics_table(comment: String, recs: &[MetricsRecord]) -> Table {
    let mut t = Table::new(
        comment,
        &[
            "epoch",
            "train_naive_loss",
            "train_avg_log_loss",
            "train_cc_risk",
            "train_partial_risk",
            "test_err",
            "test_partial_risk",
            "test_cc_risk",
            "gap",
        ],
    );
    for r in recs {
        t.push(vec![
            r.epoch.into(),
            r.train_naive_loss.into(),
            r.train_avg_log_loss.into(),
            r.train_cc_risk.unwrap_or(f64::NAN).into(),
            r.train_partial_risk.into(),
            r.test_err.into(),
            r.test_partial_risk.into(),
            r.test_cc_risk.unwrap_or(f64::NAN).into(),
            r.gap.into(),
        ]);
    }
    t
}

fn cmd_train(a: &TrainArgs) -> Result<()> {
    let data = load_dataset(&a.data)?;
    let eval = match &a.eval {
        Some(p) => load_dataset(p)?,
        None => data.clone(),
    };
    let mut cfg = a.model.apply(default_train());
    cfg.model.input_dim = data.dim();
    cfg.model.output_dim = data.num_labels();
    cfg.seed = a.common.seed;
    let (params, recs) = train(&cfg, &data, &eval)?;
    let mut pairs = vec![
        ("command", "train".to_owned()),
        ("seed", cfg.seed.to_string()),
        ("data", a.data.display().to_string()),
        ("eval", a.eval.as_deref().unwrap_or(&a.data).display().to_string()),
    ];
    pairs.extend(describe_train(&cfg));
    metrics_table(describe(&pairs), &recs).write(&a.out)?;
    if let Some(p) = &a.model_out {
        save_model(&params, p)?;
    }
    let last = recs.last().expect("final record");
    println!(
        "epoch {}: train naive loss {:.6}, train partial risk {:.4}, test err {:.4}",
        last.epoch, last.train_naive_loss, last.train_partial_risk, last.test_err
    );
    Ok(())
}

fn cmd_cv(a: &CvArgs) -> Result<()> {
    let data = load_dataset(&a.data)?;
    let mut cfg = CvConfig::new(a.model.apply(default_train()));
    cfg.k = a.k.unwrap_or(cfg.k);
    cfg.repeats = a.repeats.unwrap_or(cfg.repeats);
    cfg.seed = a.common.seed;
    let summary = run_cv_benchmark(&data, &cfg)?;
    summary.to_table(&cfg).write(&a.out)?;
    println!(
        "accuracy {:.4} +- {:.4} over {} runs",
        summary.mean,
        summary.std,
        summary.folds.len()
    );
    Ok(())
}

fn cmd_gap_curve(a: &GapCurveArgs) -> Result<()> {
    let mut cfg = gap_curve_defaults(a.common.seed);
    cfg.blobs = a.blobs.apply(cfg.blobs);
    cfg.flip = a.flip.apply(cfg.flip);
    cfg.test_per_class = a.test_per_class.unwrap_or(cfg.test_per_class);
    if let Some(s) = &a.sizes {
        cfg.sizes = s.clone();
    }
    cfg.repeats = a.repeats.unwrap_or(cfg.repeats);
    cfg.train = a.model.apply(cfg.train);
    let curve = run_gap_curve(&cfg)?;
    curve.to_table(&cfg).write(&a.out)?;
    for (n, g) in cfg.sizes.iter().zip(curve.mean_gaps(&cfg.sizes)) {
        println!("n = {n}: mean gap {g:.4}");
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let mut cfg = ambiguity_defaults(a.common.seed);
    cfg.blobs = a.blobs.apply(cfg.blobs);
    cfg.q = a.q.unwrap_or(cfg.q);
    cfg.test_per_class = a.test_per_class.unwrap_or(cfg.test_per_class);
    if let Some(g) = &a.gammas {
        cfg.gammas = g.clone();
    }
    cfg.repeats = a.repeats.unwrap_or(cfg.repeats);
    cfg.train = a.model.apply(cfg.train);
    let sweep = run_ambiguity_sweep(&cfg)?;
    sweep.to_table(&cfg).write(&a.out)?;
    for &g in &sweep.gammas {
        let runs: Vec<_> = sweep.runs_at(g).collect();
        let mean = |f: fn(&crate::experiments::AmbiguityRun) -> f64| {
            naivepll_core::stats::mean(&runs.iter().map(|r| f(r)).collect::<Vec<_>>())
        };
        println!(
            "gamma = {g}: err {:.4}, pair confusion {:.4}, pair accuracy {:.4}",
            mean(|r| r.err),
            mean(|r| r.pair_confusion),
            mean(|r| r.pair_accuracy)
        );
    }
    Ok(())
}

fn cmd_bounds(a: &BoundsArgs) -> Result<()> {
    let params = match &a.model {
        Some(p) => load_model(p)?,
        None => {
            let spec = ModelSpec::new(a.input_dim, a.classes).with_hidden(a.hidden.clone());
            init_model(&spec, a.common.seed)?
        }
    };
    let data = a.data.as_deref().map(load_dataset).transpose()?;
    let cfg = BoundsConfig {
        d_h: a.d_h,
        epsilon: a.epsilon,
        delta: a.delta,
        gamma: a.gamma,
        rho: a.rho,
        m: a.m,
        n: a.n,
        radius: a.radius,
    };
    let report = compute_bounds(&params, data.as_ref().map(|d| d.features()), &cfg)?;
    let text = report.to_text();
    print!("{text}");
    if let Some(out) = &a.out {
        write_file(out, text.as_bytes())?;
    }
    Ok(())
}

fn cmd_complexity(a: &ComplexityArgs) -> Result<()> {
    let mut cfg = complexity_defaults(a.common.seed);
    cfg.blobs = a.blobs.apply(cfg.blobs);
    cfg.flip = a.flip.apply(cfg.flip);
    cfg.test_per_class = a.test_per_class.unwrap_or(cfg.test_per_class);
    cfg.runs = a.runs.unwrap_or(cfg.runs);
    cfg.bits = a.bits.unwrap_or(cfg.bits);
    cfg.train = a.model.apply(cfg.train);
    let report = run_complexity_experiment(&cfg)?;
    report.to_table(&cfg).write(&a.out)?;
    let unfit = report.runs.iter().filter(|r| !r.fitted).count();
    println!(
        "median complexity: structured {} randomized {}; one-sided rank-sum p = {}; {unfit} run(s) did not reach the fit threshold",
        report.median_structured,
        report.median_randomized,
        report.test.map_or("n/a".to_owned(), |t| format!("{:.4}", t.p_value))
    );
    Ok(())
}
