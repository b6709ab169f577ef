use naivepll_core::losses::{candidate_set_count, cc_loss_upper_bound};
use naivepll_core::nn::softmax_rows;
use naivepll_core::{
    avg_log_loss, cc_risk, classification_error, cross_entropy, naive_loss,
    partial_zero_one_risk, CandidateMasks, Matrix,
};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Matrix, CandidateMasks, Vec<usize>)> {
    (2usize..=10, 1usize..=8).prop_flat_map(|(k, b)| {
        (
            prop::collection::vec(-8.0f64..8.0, b * k),
            prop::collection::vec(prop::collection::vec(any::<bool>(), k), b),
            prop::collection::vec(0..k, b),
        )
            .prop_map(move |(logits, bits, labels)| {
                let sets: Vec<Vec<usize>> = bits
                    .iter()
                    .zip(&labels)
                    .map(|(row, &y)| (0..k).filter(|&j| row[j] || j == y).collect())
                    .collect();
                let logits = Matrix::from_vec(b, k, logits).unwrap();
                (softmax_rows(&logits), CandidateMasks::from_sets(k, &sets).unwrap(), labels)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cc_risk_is_naive_loss_plus_constant((probs, masks, _) in instance()) {
        let k = masks.num_labels();
        let naive = naive_loss(&probs, &masks).unwrap().0;
        let cc = cc_risk(&probs, &masks, k).unwrap();
        let c = ((1u64 << (k - 1)) as f64 - 1.0).ln();
        prop_assert!((cc - naive - c).abs() < 1e-9);
    }

    #[test]
    fn naive_loss_is_at_most_avg_log((probs, masks, _) in instance()) {
        let naive = naive_loss(&probs, &masks).unwrap().0;
        let avg = avg_log_loss(&probs, &masks).unwrap().0;
        // The candidate mass can round to just above 1.
        prop_assert!(naive >= -1e-15);
        prop_assert!(naive <= avg + 1e-12);
    }

    #[test]
    fn singleton_sets_collapse_to_cross_entropy((probs, _, labels) in instance()) {
        let k = probs.cols();
        let masks = CandidateMasks::singletons(k, &labels).unwrap();
        let (n, gn) = naive_loss(&probs, &masks).unwrap();
        let (a, ga) = avg_log_loss(&probs, &masks).unwrap();
        let (c, gc) = cross_entropy(&probs, &labels).unwrap();
        prop_assert!((n - c).abs() < 1e-12 && (a - c).abs() < 1e-12);
        for ((x, y), z) in gn.as_slice().iter().zip(ga.as_slice()).zip(gc.as_slice()) {
            prop_assert!((x - z).abs() < 1e-12 && (y - z).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_risk_never_exceeds_error((probs, masks, labels) in instance()) {
        let preds = naivepll_core::matrix::argmax_rows(&probs);
        let pr = partial_zero_one_risk(&preds, &masks);
        let err = classification_error(&preds, Some(&labels)).unwrap();
        prop_assert!((0.0..=1.0).contains(&pr));
        prop_assert!(pr <= err);
    }

    #[test]
    fn full_sets_have_zero_naive_loss((probs, _, _) in instance()) {
        let k = probs.cols();
        let all: Vec<Vec<usize>> = (0..probs.rows()).map(|_| (0..k).collect()).collect();
        let masks = CandidateMasks::from_sets(k, &all).unwrap();
        prop_assert!(naive_loss(&probs, &masks).unwrap().0.abs() < 1e-12);
    }
}

#[test]
fn cc_constants() {
    assert_eq!(candidate_set_count(2).unwrap(), 1);
    assert_eq!(candidate_set_count(4).unwrap(), 7);
    assert!(candidate_set_count(1).is_err());
    assert!(candidate_set_count(53).is_err());
    assert!((cc_loss_upper_bound(4).unwrap() - (7.0f64 / 1e-12).ln()).abs() < 1e-12);
}
