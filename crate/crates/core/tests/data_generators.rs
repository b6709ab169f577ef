use naivepll_core::data::distractor;
use naivepll_core::{
    ambiguity_degree_analytic, ambiguity_degree_estimate, gen_gaussian_blobs, gen_partial_labels,
    kfold_split, BlobSpec, FlipSpec, PllDataset,
};

fn blobs(classes: usize, n_per_class: usize, radius: f64, sigma: f64) -> PllDataset {
    gen_gaussian_blobs(&BlobSpec { classes, dim: 2, radius, sigma, n_per_class }, 1).unwrap()
}

/// Nearest class mean, with the means estimated from the data.
fn nearest_mean_accuracy(d: &PllDataset) -> f64 {
    let (k, dim) = (d.num_labels(), d.dim());
    let labels = d.true_labels().unwrap();
    let mut means = vec![vec![0.0; dim]; k];
    let mut counts = vec![0.0; k];
    for (i, &y) in labels.iter().enumerate() {
        counts[y] += 1.0;
        for (m, x) in means[y].iter_mut().zip(d.features().row(i)) {
            *m += x;
        }
    }
    for (m, c) in means.iter_mut().zip(&counts) {
        m.iter_mut().for_each(|v| *v /= c);
    }
    let correct = labels
        .iter()
        .enumerate()
        .filter(|&(i, &y)| {
            let x = d.features().row(i);
            let dist = |m: &Vec<f64>| m.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            let best = (0..k).min_by(|&a, &b| dist(&means[a]).total_cmp(&dist(&means[b]))).unwrap();
            best == y
        })
        .count();
    correct as f64 / labels.len() as f64
}

#[test]
fn separated_blobs_are_linearly_separable() {
    let d = blobs(2, 500, 10.0, 0.5);
    assert!(nearest_mean_accuracy(&d) >= 0.99);
}

#[test]
fn class_counts_and_degenerate_noise() {
    let d = blobs(3, 7, 2.0, 0.0);
    let mut counts = [0; 3];
    d.true_labels().unwrap().iter().for_each(|&y| counts[y] += 1);
    assert_eq!(counts, [7, 7, 7]);
    let spec = BlobSpec { classes: 3, dim: 2, radius: 2.0, sigma: 0.0, n_per_class: 7 };
    for (i, &y) in d.true_labels().unwrap().iter().enumerate() {
        assert_eq!(d.features().row(i), spec.class_mean(y).as_slice());
    }
}

#[test]
fn mean_set_size_matches_expectation() {
    let d = gen_partial_labels(&blobs(4, 2500, 3.0, 1.0), &FlipSpec::uniform(0.3), 4).unwrap();
    let n = d.len() as f64;
    // |S| - 1 is Binomial(3, 0.3) per example.
    let sd = (3.0 * 0.3 * 0.7 / n).sqrt();
    assert!((d.masks().mean_set_size() - 1.9).abs() < 3.0 * sd);
}

#[test]
fn flip_extremes() {
    let base = blobs(4, 10, 3.0, 1.0);
    let none = gen_partial_labels(&base, &FlipSpec::uniform(0.0), 1).unwrap();
    assert!((0..none.len()).all(|i| none.masks().set_size(i) == 1));
    let all = gen_partial_labels(&base, &FlipSpec::uniform(1.0), 1).unwrap();
    assert!((0..all.len()).all(|i| all.masks().set_size(i) == 4));
    let coupled = gen_partial_labels(&base, &FlipSpec::coupled(0.0, 1.0), 1).unwrap();
    for (i, &y) in coupled.true_labels().unwrap().iter().enumerate() {
        assert_eq!(coupled.masks().labels(i).count(), 2);
        assert!(coupled.masks().contains(i, distractor(y, 4)));
    }
}

#[test]
fn ambiguity_estimates_concentrate() {
    let base = blobs(4, 5000, 3.0, 1.0);
    let d = gen_partial_labels(&base, &FlipSpec::uniform(0.3), 8).unwrap();
    let est = ambiguity_degree_estimate(&d).unwrap();
    assert!((0.27..=0.33).contains(&est.gamma), "{}", est.gamma);

    // Every ordered pair frequency within 3 binomial standard deviations of q.
    let labels = d.true_labels().unwrap();
    for y in 0..4 {
        let rows: Vec<usize> = (0..d.len()).filter(|&i| labels[i] == y).collect();
        let tol = 3.0 * (0.3f64 * 0.7 / rows.len() as f64).sqrt();
        for other in (0..4).filter(|&o| o != y) {
            let f = rows.iter().filter(|&&i| d.masks().contains(i, other)).count() as f64
                / rows.len() as f64;
            assert!((f - 0.3).abs() < tol, "pair ({y},{other}): {f}");
        }
    }

    let coupled = FlipSpec::coupled(0.2, 0.7);
    let d = gen_partial_labels(&base, &coupled, 9).unwrap();
    let est = ambiguity_degree_estimate(&d).unwrap().gamma;
    let tol = 3.0 * (0.7f64 * 0.3 / 5000.0).sqrt();
    assert!((est - ambiguity_degree_analytic(&coupled)).abs() < tol, "{est}");

    let d = gen_partial_labels(&base, &FlipSpec::coupled(0.0, 1.0), 9).unwrap();
    assert_eq!(ambiguity_degree_estimate(&d).unwrap().gamma, 1.0);
}

#[test]
fn kfold_partitions() {
    let folds = kfold_split(100, 10, 3, 5).unwrap();
    assert_eq!(folds.len(), 30);
    for r in 0..3 {
        let mut seen = vec![0; 100];
        for f in folds.iter().filter(|f| f.repeat == r) {
            assert_eq!(f.test.len(), 10);
            assert_eq!(f.train.len(), 90);
            f.test.iter().for_each(|&i| seen[i] += 1);
            assert!(f.train.iter().all(|i| !f.test.contains(i)));
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
    assert_ne!(folds[0].test, folds[10].test);
    assert_eq!(folds, kfold_split(100, 10, 3, 5).unwrap());

    let uneven = kfold_split(23, 5, 1, 0).unwrap();
    let sizes: Vec<usize> = uneven.iter().map(|f| f.test.len()).collect();
    assert_eq!(sizes, vec![5, 5, 5, 4, 4]);
    assert!(kfold_split(3, 4, 1, 0).is_err());
}
