use naivepll_core::{
    gen_gaussian_blobs, gen_partial_labels, BlobSpec, FlipSpec, Matrix, ModelSpec, PllDataset,
    TrainConfig,
};
use naivepll_harness::experiments::*;

fn small_train() -> TrainConfig {
    let mut t = TrainConfig::new(ModelSpec::new(1, 1).with_hidden(vec![8, 8]));
    t.epochs = 5;
    t.eval_every = 5;
    t.batch_size = 32;
    t
}

fn blobs(n_per_class: usize) -> BlobSpec {
    BlobSpec { classes: 3, dim: 4, radius: 6.0, sigma: 0.5, n_per_class }
}

fn table_lines(bytes: Vec<u8>) -> Vec<String> {
    String::from_utf8(bytes).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn cv_on_constant_features_and_unlabeled_data() {
    let labels = vec![0usize; 20];
    let x = Matrix::from_vec(20, 2, vec![1.0; 40]).unwrap();
    let data = PllDataset::supervised(x, 2, labels).unwrap();
    let mut train = small_train();
    train.epochs = 200;
    train.eval_every = 200;
    let mut cfg = CvConfig::new(train);
    cfg.k = 4;
    cfg.repeats = 2;
    let s = run_cv_benchmark(&data, &cfg).unwrap();
    assert_eq!(s.folds.len(), 8);
    assert_eq!(s.mean, 1.0);
    assert_eq!(s.std, 0.0);
    assert_eq!(s, run_cv_benchmark(&data, &cfg).unwrap());

    let unlabeled = PllDataset::new(data.features().clone(), data.masks().clone(), None).unwrap();
    assert!(run_cv_benchmark(&unlabeled, &cfg).is_err());
}

fn gap_config() -> GapCurveConfig {
    GapCurveConfig {
        blobs: blobs(40),
        flip: FlipSpec::uniform(0.3),
        test_per_class: 20,
        sizes: vec![30, 60],
        repeats: 2,
        train: small_train(),
        seed: 3,
    }
}

#[test]
fn gap_curve_shapes_and_validation() {
    let cfg = gap_config();
    let curve = run_gap_curve(&cfg).unwrap();
    assert_eq!(curve.runs.len(), 4);
    assert_eq!(curve.mean_gaps(&cfg.sizes).len(), 2);
    let lines = table_lines(curve.to_table(&cfg).to_bytes().unwrap());
    assert!(lines[0].starts_with("# "));
    assert!(lines[1].starts_with("n,err_mean,err_std,"));
    assert_eq!(lines.len(), 4);
    assert_eq!(curve, run_gap_curve(&cfg).unwrap());

    let empty = GapCurveConfig { sizes: vec![], ..gap_config() };
    assert_eq!(table_lines(run_gap_curve(&empty).unwrap().to_table(&empty).to_bytes().unwrap()).len(), 2);
    let none = GapCurveConfig { repeats: 0, ..gap_config() };
    assert!(run_gap_curve(&none).unwrap().runs.is_empty());

    for bad in [vec![60, 30], vec![30, 30], vec![500], vec![1]] {
        assert!(run_gap_curve(&GapCurveConfig { sizes: bad.clone(), ..gap_config() }).is_err(), "{bad:?}");
    }
}

fn sweep_config() -> AmbiguitySweepConfig {
    AmbiguitySweepConfig {
        blobs: blobs(30),
        q: 0.0,
        test_per_class: 20,
        gammas: vec![1.0, 0.0, 0.5, 0.0],
        repeats: 2,
        train: small_train(),
        seed: 5,
    }
}

#[test]
fn sweep_sorts_gammas_and_reports_pair_metrics() {
    let cfg = sweep_config();
    let s = run_ambiguity_sweep(&cfg).unwrap();
    assert_eq!(s.gammas, vec![0.0, 0.5, 1.0]);
    assert_eq!(s.runs.len(), 6);
    assert!(s.runs.windows(2).all(|w| w[0].gamma <= w[1].gamma));
    for r in &s.runs {
        assert!((0.0..=1.0).contains(&r.err) && (0.0..=1.0).contains(&r.pair_accuracy));
    }
    let lines = table_lines(s.to_table(&cfg).to_bytes().unwrap());
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("0.0"));
    assert_eq!(s, run_ambiguity_sweep(&cfg).unwrap());
}

#[test]
fn pair_metric_definition() {
    // K=4: distractor of y is (y + 1) mod 4.
    let labels = [0, 1, 2, 3];
    let (conf, acc) = pair_metrics(&[1, 1, 0, 0], &labels, 4);
    assert_eq!(acc, 0.75);
    assert!((conf - 2.0 / 3.0).abs() < 1e-15);
    assert!(pair_metrics(&[2, 3, 0, 1], &labels, 4).0.is_nan());
}

#[test]
fn complexity_requires_a_fit_threshold() {
    let mut cfg = ComplexityConfig {
        blobs: blobs(10),
        flip: FlipSpec::uniform(0.3),
        test_per_class: 5,
        runs: 2,
        bits: 8,
        train: small_train(),
        seed: 1,
    };
    assert!(run_complexity_experiment(&cfg).is_err());
    cfg.train.fit_threshold = Some(0.5);
    let r = run_complexity_experiment(&cfg).unwrap();
    assert_eq!(r.runs.len(), 4);
    assert_eq!(r.complexities(Condition::Structured).len(), 2);
    assert_eq!(r, run_complexity_experiment(&cfg).unwrap());
    let lines = table_lines(r.to_table(&cfg).to_bytes().unwrap());
    assert_eq!(lines[1], "condition,run,seed,epochs,fitted,train_loss,train_partial_risk,err,complexity");
}

#[test]
fn generated_splits_are_reproducible() {
    let a = gen_partial_labels(&gen_gaussian_blobs(&blobs(5), 1).unwrap(), &FlipSpec::uniform(0.5), 2).unwrap();
    let b = gen_partial_labels(&gen_gaussian_blobs(&blobs(5), 1).unwrap(), &FlipSpec::uniform(0.5), 2).unwrap();
    assert_eq!(a, b);
}
