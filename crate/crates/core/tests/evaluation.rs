use pfml_core::evaluation::*;
use proptest::prelude::*;

fn predictions() -> impl Strategy<Value = Vec<LabeledPrediction>> {
    prop::collection::vec((0.0..=1.0f64, any::<bool>()), 1..200)
        .prop_map(|v| v.into_iter().map(|(p, a)| LabeledPrediction::new(p, a).unwrap()).collect())
}

proptest! {
    #[test]
    fn rates_are_monotone_in_threshold(preds in predictions()) {
        let table = curve_sweep(&preds).unwrap();
        for w in table.rows.windows(2) {
            if let (Some(a), Some(b)) = (w[0].tpr, w[1].tpr) { prop_assert!(b <= a); }
            if let (Some(a), Some(b)) = (w[0].fpr, w[1].fpr) { prop_assert!(b <= a); }
        }
        for r in &table.rows {
            prop_assert_eq!(r.recall, r.tpr);
            prop_assert_eq!(r.counts.total(), preds.len());
        }
        if let Some(auc) = table.auc {
            prop_assert!((0.0..=1.0).contains(&auc));
            prop_assert_eq!((table.rows[0].fpr, table.rows[0].tpr), (Some(1.0), Some(1.0)));
        }
    }

    #[test]
    fn folds_partition_students(n in 1usize..300, k in 1usize..8, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let folds = kfold_split(n, k, seed).unwrap();
        let mut count = vec![0; n];
        let sizes: Vec<usize> = folds.iter().map(|f| f.test.len()).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for f in &folds {
            prop_assert_eq!(f.train.len() + f.test.len(), n);
            for &s in &f.test {
                count[s] += 1;
                prop_assert!(f.train.binary_search(&s).is_err());
            }
        }
        prop_assert!(count.iter().all(|&c| c == 1));
    }
}
