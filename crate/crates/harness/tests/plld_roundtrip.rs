use naivepll_core::{CandidateMasks, Matrix, PllDataset};
use naivepll_harness::plld::{from_str, to_string};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE / 8.0),
        -1e3f64..1e3,
    ]
}

fn dataset() -> impl Strategy<Value = PllDataset> {
    (0usize..12, 1usize..6, 1usize..8, any::<bool>()).prop_flat_map(|(n, d, k, labeled)| {
        (
            prop::collection::vec(finite(), n * d),
            prop::collection::vec(prop::collection::vec(any::<bool>(), k), n),
            prop::collection::vec(0..k, n),
        )
            .prop_map(move |(x, bits, labels)| {
                let sets: Vec<Vec<usize>> = bits
                    .iter()
                    .zip(&labels)
                    .map(|(row, &y)| (0..k).filter(|&j| row[j] || j == y).collect())
                    .collect();
                PllDataset::new(
                    Matrix::from_vec(n, d, x).unwrap(),
                    CandidateMasks::from_sets(k, &sets).unwrap(),
                    labeled.then_some(labels),
                )
                .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_round_trip_is_exact(data in dataset()) {
        let text = to_string(&data);
        let back = from_str(&text).unwrap();
        prop_assert_eq!(back.features().rows(), data.features().rows());
        for (a, b) in back.features().as_slice().iter().zip(data.features().as_slice()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(back.masks(), data.masks());
        prop_assert_eq!(back.true_labels(), data.true_labels());
        prop_assert_eq!(to_string(&back), text);
    }
}

#[test]
fn hundred_generated_datasets_round_trip() {
    use naivepll_core::{gen_gaussian_blobs, gen_partial_labels, BlobSpec, FlipSpec};
    for seed in 0..100u64 {
        let spec = BlobSpec {
            classes: 2 + (seed % 5) as usize,
            dim: 2 + (seed % 7) as usize,
            radius: 3.0,
            sigma: 1.0,
            n_per_class: 1 + (seed % 4) as usize,
        };
        let clean = gen_gaussian_blobs(&spec, seed).unwrap();
        let data = gen_partial_labels(&clean, &FlipSpec::uniform(0.4), seed).unwrap();
        assert_eq!(from_str(&to_string(&data)).unwrap(), data, "seed {seed}");
    }
}

#[test]
fn rejects_malformed_input() {
    let good = "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 0,2 | 2\n";
    assert!(from_str(good).is_ok());
    for bad in [
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 0,2 | 2",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 2,0 | 2\n",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 0,1 | 2\n",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 | 0,2 | 2\n",
        "PLLD v1 n=2 d=2 K=3 labeled=1\n1.0 2.0 | 0,2 | 2\n",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | | 2\n",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 0 2 | 2\n",
        "PLLD v1 n=1 d=2 K=3 labeled=1\n1.0 nan | 0,2 | 2\n",
        "PLLD v2 n=1 d=2 K=3 labeled=1\n1.0 2.0 | 0,2 | 2\n",
    ] {
        assert!(from_str(bad).is_err(), "{bad:?}");
    }
}
