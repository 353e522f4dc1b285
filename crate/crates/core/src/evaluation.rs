//! Cross validation, threshold classification and precision/ROC curves.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::irt::{icc_probability, Ability, ItemParams};
use crate::seeded_rng;

/// Number of thresholds in the default sweep (0.00 to 1.00 by 0.01).
pub const THRESHOLD_STEPS: usize = 100;

/// Desired output for a training row: the 3PL probability itself.
pub fn oracle_3pl(item: &ItemParams, theta: Ability) -> f64 {
    icc_probability(item, theta.get())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffles student indices `0..n_students` and deals them round-robin
/// into `k` test folds. Each fold's train set is the complement.
pub fn kfold_split(n_students: usize, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k == 0 || k > n_students {
        return Err(Error::FoldCount {
            folds: k,
            students: n_students,
        });
    }
    let mut order: Vec<usize> = (0..n_students).collect();
    order.shuffle(&mut seeded_rng(seed));
    let mut assignment = alloc::vec![0usize; n_students];
    for (pos, &s) in order.iter().enumerate() {
        assignment[s] = pos % k;
    }
    Ok((0..k)
        .map(|f| {
            let (test, train) = (0..n_students).partition(|&s| assignment[s] == f);
            Fold { train, test }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPrediction {
    predicted: f64,
    actual: bool,
}

impl LabeledPrediction {
    pub fn new(predicted: f64, actual: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&predicted) {
            return Err(Error::OutOfRange {
                name: "predicted",
                value: predicted,
            });
        }
        Ok(Self { predicted, actual })
    }

    pub fn predicted(&self) -> f64 {
        self.predicted
    }

    pub fn actual(&self) -> bool {
        self.actual
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Predictions at or above `t` count as positive.
pub fn confusion_at_threshold(preds: &[LabeledPrediction], t: f64) -> ConfusionCounts {
    let mut cc = ConfusionCounts::default();
    for p in preds {
        match (p.predicted >= t, p.actual) {
            (true, true) => cc.tp += 1,
            (true, false) => cc.fp += 1,
            (false, false) => cc.tn += 1,
            (false, true) => cc.fn_ += 1,
        }
    }
    cc
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// `None` when nothing was classified positive.
pub fn precision(cc: &ConfusionCounts) -> Option<f64> {
    ratio(cc.tp, cc.tp + cc.fp)
}

pub fn recall(cc: &ConfusionCounts) -> Option<f64> {
    ratio(cc.tp, cc.tp + cc.fn_)
}

pub fn tpr(cc: &ConfusionCounts) -> Option<f64> {
    recall(cc)
}

pub fn fpr(cc: &ConfusionCounts) -> Option<f64> {
    ratio(cc.fp, cc.fp + cc.tn)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
    /// Trapezoidal area under the ROC points plus the `(0, 0)` corner;
    /// `None` if either class is absent.
    pub auc: Option<f64>,
}

/// Sweeps thresholds `0.00, 0.01, …, 1.00`.
pub fn curve_sweep(preds: &[LabeledPrediction]) -> Result<CurveTable> {
    let thresholds: Vec<f64> = (0..=THRESHOLD_STEPS).map(|i| i as f64 / THRESHOLD_STEPS as f64).collect();
    curve_sweep_at(preds, &thresholds)
}

pub fn curve_sweep_at(preds: &[LabeledPrediction], thresholds: &[f64]) -> Result<CurveTable> {
    if preds.is_empty() {
        return Err(Error::InvalidConfig("no predictions to sweep".into()));
    }
    let rows: Vec<CurveRow> = thresholds
        .iter()
        .map(|&t| {
            let cc = confusion_at_threshold(preds, t);
            CurveRow {
                threshold: t,
                counts: cc,
                precision: precision(&cc),
                recall: recall(&cc),
                tpr: tpr(&cc),
                fpr: fpr(&cc),
            }
        })
        .collect();
    let mut points: Vec<(f64, f64)> = rows.iter().filter_map(|r| Some((r.fpr?, r.tpr?))).collect();
    let auc = if points.is_empty() {
        None
    } else {
        points.push((0.0, 0.0));
        Some(trapezoid_area(&mut points))
    };
    Ok(CurveTable { rows, auc })
}

fn trapezoid_area(points: &mut [(f64, f64)]) -> f64 {
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(p: f64, a: u8) -> LabeledPrediction {
        LabeledPrediction::new(p, a == 1).unwrap()
    }

    #[test]
    fn oracle_matches_icc() {
        let item = ItemParams::new(0.96, 0.59, 0.23).unwrap();
        assert!((oracle_3pl(&item, Ability::new(1.5).unwrap()) - 0.857).abs() < 0.002);
        assert!((oracle_3pl(&item, Ability::new(-1.5).unwrap()) - 0.254).abs() < 0.002);
    }

    #[test]
    fn ten_students_five_folds() {
        let folds = kfold_split(10, 5, 3).unwrap();
        let mut seen = alloc::vec![0; 10];
        for f in &folds {
            assert_eq!(f.test.len(), 2);
            assert_eq!(f.train.len(), 8);
            for &s in &f.test {
                seen[s] += 1;
                assert!(!f.train.contains(&s));
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(folds, kfold_split(10, 5, 3).unwrap());
    }

    #[test]
    fn default_cohort_fold_sizes() {
        let folds = kfold_split(732, 5, 0).unwrap();
        let sizes: Vec<usize> = folds.iter().map(|f| f.test.len()).collect();
        assert!(sizes.iter().all(|s| *s == 146 || *s == 147));
        assert_eq!(sizes.iter().sum::<usize>(), 732);
    }

    #[test]
    fn too_many_folds() {
        assert_eq!(kfold_split(3, 5, 0), Err(Error::FoldCount { folds: 5, students: 3 }));
        assert!(kfold_split(3, 0, 0).is_err());
    }

    #[test]
    fn hand_enumerated_confusion() {
        let preds = [lp(0.9, 1), lp(0.6, 0), lp(0.2, 1)];
        let cc = confusion_at_threshold(&preds, 0.5);
        assert_eq!(cc, ConfusionCounts { tp: 1, fp: 1, tn: 0, fn_: 1 });
        let table = curve_sweep(&preds).unwrap();
        assert_eq!(table.rows[50].counts, cc);
        assert_eq!(table.rows[50].threshold, 0.5);
    }

    #[test]
    fn threshold_edges() {
        let preds = [lp(0.0, 0), lp(0.3, 1), lp(1.0, 1), lp(0.99, 0)];
        let cc = confusion_at_threshold(&preds, 0.0);
        assert_eq!((cc.fn_, cc.tn), (0, 0));
        let cc = confusion_at_threshold(&preds, 1.0);
        assert_eq!((cc.tp, cc.fp), (1, 0));
    }

    #[test]
    fn ratios() {
        let cc = ConfusionCounts { tp: 2, fp: 1, tn: 5, fn_: 0 };
        assert!((precision(&cc).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(recall(&cc), Some(1.0));
        assert_eq!(fpr(&ConfusionCounts { tp: 1, fp: 0, tn: 5, fn_: 0 }), Some(0.0));
        let none = ConfusionCounts { tp: 0, fp: 0, tn: 3, fn_: 0 };
        assert_eq!(precision(&none), None);
        assert_eq!(recall(&none), None);
    }

    #[test]
    fn perfect_separator() {
        let preds = [lp(0.9, 1), lp(0.8, 1), lp(0.2, 0), lp(0.1, 0)];
        let t = curve_sweep(&preds).unwrap();
        assert_eq!(t.auc, Some(1.0));
        assert_eq!((t.rows[0].fpr, t.rows[0].tpr), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn constant_prediction_is_chance() {
        let preds = [lp(0.4, 1), lp(0.4, 0), lp(0.4, 1)];
        let t = curve_sweep(&preds).unwrap();
        for r in &t.rows {
            assert_eq!(r.tpr, r.fpr);
        }
        assert_eq!(t.auc, Some(0.5));
    }

    #[test]
    fn single_class_has_no_auc() {
        assert_eq!(curve_sweep(&[lp(0.4, 1)]).unwrap().auc, None);
        assert!(curve_sweep(&[]).is_err());
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(LabeledPrediction::new(1.2, true).is_err());
    }
}
