//! Empirical evaluation: confusion counts, minority metrics, and PR-AUC
//! from scores.

use crate::error::{Error, Result};
use crate::metrics::{metrics_from_rates, ConfusionRates, MetricBundle};
use crate::simulate::Class;
use crate::specfun::Probability;

/// Raw counts with minority as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn rates(&self) -> ConfusionRates<f64> {
        let n = self.total() as f64;
        let frac = |c: usize| Probability::new(c as f64 / n).expect("count fraction");
        ConfusionRates {
            tp: frac(self.tp),
            fp: frac(self.fp),
            fn_: frac(self.fn_),
            tn: frac(self.tn),
        }
    }
}

/// Metrics and confusion counts for one prediction run.
///
/// PR-AUC sweeps all distinct score values descending (ties grouped at one
/// threshold) and integrates precision over recall by trapezoid. It is
/// absent when the truth contains a single class.
pub fn evaluate(
    scores: &[f64],
    predicted: &[Class],
    truth: &[Class],
) -> Result<(MetricBundle<f64>, ConfusionMatrix)> {
    let n = truth.len();
    if n == 0 || scores.len() != n || predicted.len() != n {
        return Err(Error::input(
            "evaluate: scores, predictions, and truth must share a positive length",
        ));
    }
    let mut cm = ConfusionMatrix { tp: 0, fp: 0, fn_: 0, tn: 0 };
    for (pred, actual) in predicted.iter().zip(truth) {
        match (pred, actual) {
            (Class::Minority, Class::Minority) => cm.tp += 1,
            (Class::Minority, Class::Majority) => cm.fp += 1,
            (Class::Majority, Class::Minority) => cm.fn_ += 1,
            (Class::Majority, Class::Majority) => cm.tn += 1,
        }
    }
    let mut bundle = metrics_from_rates(&cm.rates());
    bundle.pr_auc_minority = pr_auc(scores, truth);
    Ok((bundle, cm))
}

/// Trapezoidal PR-AUC over distinct score thresholds, or None when the
/// truth is single-class.
pub fn pr_auc(scores: &[f64], truth: &[Class]) -> Option<f64> {
    let positives = truth.iter().filter(|&&l| l == Class::Minority).count();
    let negatives = truth.len() - positives;
    if positives == 0 || negatives == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut auc = 0.0;
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut prev_recall = 0.0;
    let mut prev_precision = 1.0;
    let mut i = 0;
    while i < order.len() {
        // Group ties at one threshold.
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            match truth[order[i]] {
                Class::Minority => tp += 1,
                Class::Majority => fp += 1,
            }
            i += 1;
        }
        let recall = tp as f64 / positives as f64;
        let precision = tp as f64 / (tp + fp) as f64;
        auc += (recall - prev_recall) * (precision + prev_precision) / 2.0;
        prev_recall = recall;
        prev_precision = precision;
    }
    Some(auc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn perfect_predictions() {
        let truth = vec![Class::Minority, Class::Minority, Class::Majority, Class::Majority];
        let scores = vec![2.0, 1.5, -1.0, -2.0];
        let (m, cm) = evaluate(&scores, &truth, &truth).unwrap();
        assert_eq!(m.recall_minority, 1.0);
        assert_eq!(m.precision_minority, 1.0);
        assert_eq!(m.f1_minority, 1.0);
        assert_eq!(m.balanced_accuracy, 1.0);
        assert!((m.cohen_kappa - 1.0).abs() < 1e-12);
        assert!((m.pr_auc_minority.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cm, ConfusionMatrix { tp: 2, fp: 0, fn_: 0, tn: 2 });
    }

    #[test]
    fn all_majority_on_skewed_truth() {
        let mut truth = vec![Class::Majority; 90];
        truth.extend(vec![Class::Minority; 10]);
        let predicted = vec![Class::Majority; 100];
        let scores = vec![-1.0; 100];
        let (m, cm) = evaluate(&scores, &predicted, &truth).unwrap();
        assert_eq!(m.recall_minority, 0.0);
        assert!((m.balanced_accuracy - 0.5).abs() < 1e-12);
        assert!(m.cohen_kappa.abs() < 1e-12);
        assert!(m.no_predicted_positives);
        assert_eq!(cm.tp, 0);
        assert_eq!(cm.fn_, 10);
    }

    #[test]
    fn random_scores_balanced_truth_auc_near_half() {
        let mut rng = crate::simulate::task_rng(123, 0);
        let n = 20_000;
        let truth: Vec<Class> = (0..n)
            .map(|i| if i % 2 == 0 { Class::Minority } else { Class::Majority })
            .collect();
        let scores: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let auc = pr_auc(&scores, &truth).unwrap();
        assert!((auc - 0.5).abs() < 0.02, "auc {auc}");
    }

    #[test]
    fn single_class_truth_has_no_auc() {
        let truth = vec![Class::Majority; 5];
        let scores = vec![0.0; 5];
        let predicted = vec![Class::Majority; 5];
        let (m, _) = evaluate(&scores, &predicted, &truth).unwrap();
        assert!(m.pr_auc_minority.is_none());
    }

    #[test]
    fn tied_scores_grouped_at_one_threshold() {
        // All scores equal: the curve is the single point
        // (recall 1, precision = prevalence), so AUC is prevalence-ish
        // regardless of row order.
        let truth = vec![Class::Minority, Class::Majority, Class::Majority, Class::Majority];
        let scores = vec![0.5; 4];
        let auc_a = pr_auc(&scores, &truth).unwrap();
        let truth_b = vec![Class::Majority, Class::Majority, Class::Majority, Class::Minority];
        let auc_b = pr_auc(&scores, &truth_b).unwrap();
        assert!((auc_a - auc_b).abs() < 1e-15);
        assert!((auc_a - 0.625).abs() < 1e-12); // trapezoid from (0,1) to (1,0.25)
    }

    #[test]
    fn length_mismatch_rejected() {
        let truth = vec![Class::Minority];
        assert!(evaluate(&[0.0, 1.0], &[Class::Minority], &truth).is_err());
        assert!(evaluate(&[], &[], &[]).is_err());
    }
}
