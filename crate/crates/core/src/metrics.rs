//! Theoretical metric surfaces in triplet space.
//!
//! All metrics treat the minority class as positive. The population
//! confusion fractions come straight from the closed-form class errors, so
//! these are exact performance landscapes, not sample estimates.

use crate::error::{Error, Result};
use crate::landscape::{class_errors, RegimeLabel, RegimeReport, TripletPoint};
use crate::landscape::numeric_slope;
use crate::real::{real, Real};
use crate::specfun::{normal_cdf, Probability};

/// Population confusion fractions (sum to 1); minority is positive.
#[derive(Debug, Clone, Copy)]
pub struct ConfusionRates<R: Real> {
    pub tp: Probability<R>,
    pub fp: Probability<R>,
    pub fn_: Probability<R>,
    pub tn: Probability<R>,
}

/// One evaluation's worth of minority-focused metrics.
#[derive(Debug, Clone, Copy)]
pub struct MetricBundle<R: Real> {
    pub recall_minority: R,
    pub precision_minority: R,
    pub f1_minority: R,
    pub balanced_accuracy: R,
    pub balanced_error_rate: R,
    pub cohen_kappa: R,
    /// Absent for theoretical points evaluated without a score model, and
    /// for empirical evaluations with single-class truth.
    pub pr_auc_minority: Option<R>,
    /// True when the point predicts no positives at all, making precision
    /// 0 by convention rather than by measurement.
    pub no_predicted_positives: bool,
}

impl<R: Real> MetricBundle<R> {
    /// Names and values in a fixed order, for tabular output.
    pub fn named(&self) -> [(&'static str, R); 6] {
        [
            ("recall_min", self.recall_minority),
            ("precision_min", self.precision_minority),
            ("f1_min", self.f1_minority),
            ("balanced_accuracy", self.balanced_accuracy),
            ("balanced_error_rate", self.balanced_error_rate),
            ("cohen_kappa", self.cohen_kappa),
        ]
    }
}

/// Precision-recall curve with trapezoidal AUC.
#[derive(Debug, Clone)]
pub struct PrCurve<R: Real> {
    /// (recall, precision) ordered by descending score threshold, i.e. by
    /// non-decreasing recall.
    pub points: Vec<(R, R)>,
    pub auc: R,
}

/// Empirical-vs-theoretical slope ratios along an eta grid.
#[derive(Debug, Clone)]
pub struct RobustnessReport<R: Real> {
    pub model_name: String,
    /// (eta, empirical slope, theoretical slope, rho). `rho` is absent where
    /// the theoretical slope is below the negligibility cutoff.
    pub grid: Vec<(R, R, R, Option<R>)>,
}

/// Population confusion at a triplet point.
pub fn confusion_rates<R: Real>(point: &TripletPoint<R>) -> Result<ConfusionRates<R>> {
    let errors = class_errors(point)?;
    let priors = point.priors();
    let pi_min = priors.pi_minority.value();
    let pi_maj = priors.pi_majority.value();
    Ok(ConfusionRates {
        tp: Probability::new(pi_min * (R::one() - errors.e_minority.value()))?,
        fn_: Probability::new(pi_min * errors.e_minority.value())?,
        fp: Probability::new(pi_maj * errors.e_majority.value())?,
        tn: Probability::new(pi_maj * (R::one() - errors.e_majority.value()))?,
    })
}

/// Metrics from confusion fractions. Shared by the theoretical surfaces and
/// the empirical evaluator (which divides counts by the total first).
pub fn metrics_from_rates<R: Real>(rates: &ConfusionRates<R>) -> MetricBundle<R> {
    let tp = rates.tp.value();
    let fp = rates.fp.value();
    let fn_ = rates.fn_.value();
    let tn = rates.tn.value();
    let two = real::<R>(2.0);

    let pos_truth = tp + fn_;
    let pos_pred = tp + fp;
    let recall = if pos_truth > R::zero() { tp / pos_truth } else { R::zero() };
    let no_predicted_positives = pos_pred == R::zero();
    let precision = if no_predicted_positives { R::zero() } else { tp / pos_pred };
    let f1 = if recall + precision > R::zero() {
        two * recall * precision / (recall + precision)
    } else {
        R::zero()
    };

    let neg_truth = tn + fp;
    let specificity = if neg_truth > R::zero() { tn / neg_truth } else { R::zero() };
    let ber = R::one() - (recall + specificity) / two;
    let ba = R::one() - ber;

    let p_o = tp + tn;
    let p_e = pos_pred * pos_truth + (fn_ + tn) * (fp + tn);
    let kappa = if (R::one() - p_e).abs() > R::zero() {
        (p_o - p_e) / (R::one() - p_e)
    } else {
        R::zero()
    };

    MetricBundle {
        recall_minority: recall,
        precision_minority: precision,
        f1_minority: f1,
        balanced_accuracy: ba,
        balanced_error_rate: ber,
        cohen_kappa: kappa,
        pr_auc_minority: None,
        no_predicted_positives,
    }
}

/// Closed-form metric surface at a triplet point (no PR-AUC; attach one via
/// [`theoretical_pr_curve`] if needed).
pub fn theoretical_metrics<R: Real>(point: &TripletPoint<R>) -> Result<MetricBundle<R>> {
    Ok(metrics_from_rates(&confusion_rates(point)?))
}

/// Theoretical precision-recall curve of the two-Gaussian score model.
///
/// The discriminant score is Gaussian with means -+d^2/2 (minority /
/// majority) and variance d^2, d the effective margin. Thresholds span
/// +-6 standard deviations around both means, linearly.
pub fn theoretical_pr_curve<R: Real>(
    point: &TripletPoint<R>,
    n_thresholds: usize,
) -> Result<PrCurve<R>> {
    if n_thresholds < 11 {
        return Err(Error::input("theoretical_pr_curve needs >= 11 thresholds"));
    }
    let d = point.effective_margin();
    let half_d2 = d * d / real(2.0);
    let priors = point.priors();
    let pi_min = priors.pi_minority.value();
    let pi_maj = priors.pi_majority.value();

    // Sweep the raw discriminant score T from high to low; predicting
    // minority when T <= theta makes recall grow as theta rises, so walk
    // theta upward = minority-score threshold downward.
    let six = real::<R>(6.0);
    let lo = -half_d2 - six * d;
    let hi = half_d2 + six * d;
    let step = (hi - lo) / real(n_thresholds as f64 - 1.0);

    let mut points = Vec::with_capacity(n_thresholds);
    let mut auc = R::zero();
    let mut prev: Option<(R, R)> = None;
    for i in 0..n_thresholds {
        let theta = lo + step * real(i as f64);
        let recall = normal_cdf((theta + half_d2) / d)?.value();
        let maj_hit = normal_cdf((theta - half_d2) / d)?.value();
        let denom = pi_min * recall + pi_maj * maj_hit;
        let precision = if denom > R::zero() { pi_min * recall / denom } else { R::zero() };
        if let Some((r0, p0)) = prev {
            auc += (recall - r0) * (precision + p0) / real(2.0);
        }
        prev = Some((recall, precision));
        points.push((recall, precision));
    }
    Ok(PrCurve { points, auc })
}

/// Per-regime quartile summaries of the theoretical metric surfaces.
///
/// `points` must sit on the same eta grid as the report. Output rows are
/// ordered by regime severity, then metric name; empty regimes are omitted.
pub fn regime_summary<R: Real>(
    report: &RegimeReport<R>,
    points: &[TripletPoint<R>],
) -> Result<Vec<RegimeSummaryRow<R>>> {
    if points.len() != report.grid.len() {
        return Err(Error::input("regime_summary: points and report grids differ in length"));
    }
    for (p, g) in points.iter().zip(&report.grid) {
        if (p.eta() - g.eta).abs() > real(1e-9) {
            return Err(Error::input("regime_summary: eta grids do not match"));
        }
    }
    let bundles: Vec<MetricBundle<R>> = points
        .iter()
        .map(theoretical_metrics)
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for regime in [
        RegimeLabel::Normal,
        RegimeLabel::Mild,
        RegimeLabel::Extreme,
        RegimeLabel::Catastrophic,
    ] {
        let group: Vec<&MetricBundle<R>> = report
            .grid
            .iter()
            .zip(&bundles)
            .filter(|(g, _)| g.label == regime)
            .map(|(_, b)| b)
            .collect();
        if group.is_empty() {
            continue;
        }
        for idx in 0..6 {
            let name = group[0].named()[idx].0;
            let mut values: Vec<R> = group.iter().map(|b| b.named()[idx].1).collect();
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));
            let mean = values.iter().copied().sum::<R>() / real(values.len() as f64);
            rows.push(RegimeSummaryRow {
                regime,
                metric: name,
                mean,
                q25: quantile_sorted(&values, 0.25),
                median: quantile_sorted(&values, 0.5),
                q75: quantile_sorted(&values, 0.75),
            });
        }
    }
    Ok(rows)
}

/// One aggregated row of [`regime_summary`].
#[derive(Debug, Clone, Copy)]
pub struct RegimeSummaryRow<R: Real> {
    pub regime: RegimeLabel,
    pub metric: &'static str,
    pub mean: R,
    pub q25: R,
    pub median: R,
    pub q75: R,
}

/// Linear-interpolation quantile of an ascending slice.
fn quantile_sorted<R: Real>(sorted: &[R], q: f64) -> R {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = real::<R>(pos - lo as f64);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Threshold below which a theoretical slope is treated as negligible and
/// rho left undefined.
pub const RHO_SLOPE_CUTOFF: f64 = 1e-9;

/// Ratio of empirical to theoretical deterioration slope along an eta grid.
pub fn robustness_ratio<R: Real>(
    model_name: &str,
    model_curve: &[(R, R)],
    theory_curve: &[(R, R)],
) -> Result<RobustnessReport<R>> {
    if model_curve.len() != theory_curve.len() {
        return Err(Error::input("robustness_ratio: curves differ in length"));
    }
    if model_curve.len() < 3 {
        return Err(Error::input("robustness_ratio needs >= 3 grid points"));
    }
    for (m, t) in model_curve.iter().zip(theory_curve) {
        if (m.0 - t.0).abs() > real(1e-9) {
            return Err(Error::input("robustness_ratio: eta grids do not match"));
        }
    }
    let to_log = |curve: &[(R, R)]| -> Vec<(R, R)> {
        curve.iter().map(|&(eta, v)| (eta.ln(), v)).collect()
    };
    let model_slopes = numeric_slope(&to_log(model_curve))?;
    let theory_slopes = numeric_slope(&to_log(theory_curve))?;
    let cutoff = real::<R>(RHO_SLOPE_CUTOFF);
    let grid = model_curve
        .iter()
        .zip(model_slopes.iter().zip(&theory_slopes))
        .map(|(&(eta, _), (&(_, sm), &(_, st)))| {
            let rho = if st.abs() > cutoff { Some(sm / st) } else { None };
            (eta, sm, st, rho)
        })
        .collect();
    Ok(RobustnessReport { model_name: model_name.to_string(), grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{classify_regimes, logspace_eta, RiskTarget};

    fn pt(eta: f64, kappa: f64, delta: f64) -> TripletPoint<f64> {
        TripletPoint::new(eta, kappa, delta).unwrap()
    }

    const PHI_M1: f64 = 0.15865525393145705;

    #[test]
    fn confusion_rates_at_balance() {
        let r = confusion_rates(&pt(1.0, 1.0, 2.0)).unwrap();
        assert!((r.tp.value() - 0.5 * (1.0 - PHI_M1)).abs() < 1e-12);
        assert!((r.tn.value() - 0.5 * (1.0 - PHI_M1)).abs() < 1e-12);
        assert!((r.fp.value() - 0.5 * PHI_M1).abs() < 1e-12);
        assert!((r.fn_.value() - 0.5 * PHI_M1).abs() < 1e-12);
        let total = r.tp.value() + r.fp.value() + r.fn_.value() + r.tn.value();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn confusion_marginals_match_priors() {
        for &eta in &[1.0, 3.0, 17.5, 200.0] {
            let r = confusion_rates(&pt(eta, 1.0, 2.0)).unwrap();
            assert!((r.tp.value() + r.fn_.value() - 1.0 / (1.0 + eta)).abs() < 1e-12);
            assert!((r.tn.value() + r.fp.value() - eta / (1.0 + eta)).abs() < 1e-12);
        }
    }

    #[test]
    fn theoretical_metrics_at_balance() {
        let m = theoretical_metrics(&pt(1.0, 1.0, 2.0)).unwrap();
        let expect = 1.0 - PHI_M1;
        assert!((m.recall_minority - expect).abs() < 1e-12);
        assert!((m.precision_minority - expect).abs() < 1e-12);
        assert!((m.f1_minority - expect).abs() < 1e-12);
        assert!((m.balanced_accuracy - expect).abs() < 1e-12);
        assert!((m.cohen_kappa - (1.0 - 2.0 * PHI_M1)).abs() < 1e-12);
    }

    #[test]
    fn recall_is_one_minus_minority_error() {
        for &eta in &[1.0, 2.5, 40.0] {
            let point = pt(eta, 0.5, 1.5);
            let m = theoretical_metrics(&point).unwrap();
            let e = class_errors(&point).unwrap();
            assert!((m.recall_minority - (1.0 - e.e_minority.value())).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_majority_predictor() {
        let m = theoretical_metrics(&pt(1e280, 1.0, 2.0)).unwrap();
        assert!(m.recall_minority < 1e-12);
        assert!(m.cohen_kappa.abs() < 1e-9);
    }

    #[test]
    fn f1_recomputable_from_components() {
        for &eta in &[1.0, 4.0, 25.0, 300.0] {
            let m = theoretical_metrics(&pt(eta, 1.0, 2.0)).unwrap();
            if m.recall_minority + m.precision_minority > 0.0 {
                let f1 = 2.0 * m.recall_minority * m.precision_minority
                    / (m.recall_minority + m.precision_minority);
                assert!((m.f1_minority - f1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn precision_asymmetry_along_eta() {
        let grid = logspace_eta(1.0, 100.0, 60).unwrap();
        let mut prev_recall = f64::INFINITY;
        let mut precisions = Vec::new();
        for &eta in &grid {
            let m = theoretical_metrics(&pt(eta, 1.0, 2.0)).unwrap();
            assert!(m.recall_minority < prev_recall);
            prev_recall = m.recall_minority;
            if !m.no_predicted_positives {
                precisions.push(m.precision_minority);
            }
        }
        // The oracle rule predicts minority exactly where the minority
        // posterior is at least one half, so its precision is the mean
        // posterior over that region: always above 1/2, and it drifts down
        // toward 1/2 as the decision region shrinks onto the boundary.
        for w in precisions.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "precision rose along eta");
        }
        for &p in &precisions {
            assert!(p > 0.5, "oracle precision must stay above 1/2, got {p}");
        }
        assert!(precisions[0] > *precisions.last().unwrap() + 0.05);
    }

    #[test]
    fn pr_curve_shape_and_bounds() {
        let point = pt(1.0, 1.0, 2.0);
        let curve = theoretical_pr_curve(&point, 2001).unwrap();
        assert!(curve.points.first().unwrap().0 < 1e-6);
        assert!(curve.points.last().unwrap().0 > 1.0 - 1e-6);
        for w in curve.points.windows(2) {
            assert!(w[1].0 >= w[0].0, "recall must be non-decreasing");
        }
        let pi_min = point.priors().pi_minority.value();
        assert!(curve.auc >= pi_min * (1.0 - 1e-6) && curve.auc <= 1.0);
    }

    #[test]
    fn pr_auc_limits_and_monotonicity() {
        // Large separation: near-perfect detector.
        let auc_wide = theoretical_pr_curve(&pt(1.0, 1.0, 12.0), 2001).unwrap().auc;
        assert!(auc_wide > 1.0 - 1e-6);
        // Vanishing separation: precision pinned at prevalence.
        let narrow = pt(4.0, 1.0, 1e-3);
        let auc_narrow = theoretical_pr_curve(&narrow, 2001).unwrap().auc;
        assert!((auc_narrow - narrow.priors().pi_minority.value()).abs() < 1e-3);
        // Prevalence drop lowers the whole precision profile.
        let auc_bal = theoretical_pr_curve(&pt(1.0, 1.0, 2.0), 2001).unwrap().auc;
        let auc_skew = theoretical_pr_curve(&pt(10.0, 1.0, 2.0), 2001).unwrap().auc;
        assert!(auc_bal > auc_skew);
    }

    #[test]
    fn pr_curve_threshold_refinement_converges() {
        let point = pt(5.0, 1.0, 2.0);
        let coarse = theoretical_pr_curve(&point, 2001).unwrap().auc;
        let fine = theoretical_pr_curve(&point, 20001).unwrap().auc;
        assert!((coarse - fine).abs() < 1e-4);
    }

    #[test]
    fn pr_curve_rejects_tiny_grids() {
        assert!(theoretical_pr_curve(&pt(1.0, 1.0, 2.0), 5).is_err());
    }

    #[test]
    fn regime_summary_grouping() {
        let grid = logspace_eta(1.0, 100.0, 40).unwrap();
        let report =
            classify_regimes(1.0, 2.0, &grid, RiskTarget::BalancedRisk, 0.1, 0.5).unwrap();
        let points: Vec<_> = grid.iter().map(|&eta| pt(eta, 1.0, 2.0)).collect();
        let rows = regime_summary(&report, &points).unwrap();
        let recall_of = |regime: RegimeLabel| {
            rows.iter()
                .find(|r| r.regime == regime && r.metric == "recall_min")
                .map(|r| r.mean)
        };
        let normal = recall_of(RegimeLabel::Normal).unwrap();
        let cat = recall_of(RegimeLabel::Catastrophic).unwrap();
        assert!(cat < normal);
        // BA medians degrade monotonically with severity among present regimes.
        let mut last = f64::INFINITY;
        for regime in [
            RegimeLabel::Normal,
            RegimeLabel::Mild,
            RegimeLabel::Extreme,
            RegimeLabel::Catastrophic,
        ] {
            if let Some(row) = rows
                .iter()
                .find(|r| r.regime == regime && r.metric == "balanced_accuracy")
            {
                assert!(row.median <= last + 1e-12);
                last = row.median;
            }
        }
    }

    #[test]
    fn regime_summary_rejects_mismatched_grid() {
        let grid = logspace_eta(1.0, 10.0, 10).unwrap();
        let report =
            classify_regimes(1.0, 2.0, &grid, RiskTarget::BalancedRisk, 0.1, 0.5).unwrap();
        let points: Vec<_> = grid.iter().take(5).map(|&eta| pt(eta, 1.0, 2.0)).collect();
        assert!(regime_summary(&report, &points).is_err());
    }

    #[test]
    fn robustness_ratio_identities() {
        let grid = logspace_eta(1.0f64, 50.0, 20).unwrap();
        let theory: Vec<(f64, f64)> = grid.iter().map(|&eta| (eta, 0.3 * eta.ln())).collect();
        // Identical curves give rho = 1 everywhere.
        let rep = robustness_ratio("self", &theory, &theory).unwrap();
        for &(_, _, _, rho) in &rep.grid {
            assert!((rho.unwrap() - 1.0).abs() < 1e-9);
        }
        // Constant model curve gives rho = 0.
        let flat: Vec<(f64, f64)> = grid.iter().map(|&eta| (eta, 0.25)).collect();
        let rep = robustness_ratio("flat", &flat, &theory).unwrap();
        for &(_, _, _, rho) in &rep.grid {
            assert!(rho.unwrap().abs() < 1e-9);
        }
        // Doubled slope gives rho = 2.
        let fast: Vec<(f64, f64)> = grid.iter().map(|&eta| (eta, 0.6 * eta.ln())).collect();
        let rep = robustness_ratio("fast", &fast, &theory).unwrap();
        for &(_, _, _, rho) in &rep.grid {
            assert!((rho.unwrap() - 2.0).abs() < 1e-9);
        }
        // Flat theory leaves rho undefined, never fabricated.
        let rep = robustness_ratio("undef", &theory, &flat).unwrap();
        for &(_, _, _, rho) in &rep.grid {
            assert!(rho.is_none());
        }
    }
}
