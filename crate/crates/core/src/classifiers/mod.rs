//! From-scratch classifiers and the controlled-imbalance experiment runner.
//!
//! Five families: penalized logistic regression (IRLS), LDA with a pooled
//! diagonal-regularized covariance, QDA with per-class ridged covariances,
//! Gaussian naive Bayes, and brute-force kNN. Every parametric family
//! carries the empirical log-prior, so class imbalance enters the decision
//! exactly as ln(eta_hat). No resampling or class weighting is applied
//! anywhere: the point is to measure uncorrected degradation.

mod evaluate;
mod experiment;
mod gaussian;
mod knn;
mod logistic;
mod triplet;

pub use evaluate::{evaluate, ConfusionMatrix};
pub use experiment::{
    degradation_curves, run_experiment, write_results_csv, write_summary_csv, CurvePoint,
    ExperimentConfig, ExperimentRow, TestDesign, RESULTS_HEADER,
};
pub use gaussian::{GnbModel, LdaModel, QdaModel};
pub use knn::KnnModel;
pub use logistic::LogisticModel;
pub use triplet::{estimate_triplet, TripletEstimate, VARIANCE_FLOOR_FRACTION};

use crate::error::{Error, Result};
use crate::simulate::{Class, Dataset};

/// Which classifier to fit, with family-specific hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    Logistic {
        l2_strength: f64,
        max_iterations: usize,
        tolerance: f64,
    },
    Lda,
    Qda,
    Gnb,
    Knn {
        k: usize,
    },
}

impl ClassifierSpec {
    /// Conventional defaults: l2 = 1.0, 100 iterations, tol 1e-8, k = 5.
    pub fn logistic_default() -> Self {
        ClassifierSpec::Logistic {
            l2_strength: 1.0,
            max_iterations: 100,
            tolerance: 1e-8,
        }
    }

    pub fn knn_default() -> Self {
        ClassifierSpec::Knn { k: 5 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::Logistic { .. } => "logistic",
            ClassifierSpec::Lda => "lda",
            ClassifierSpec::Qda => "qda",
            ClassifierSpec::Gnb => "gnb",
            ClassifierSpec::Knn { .. } => "knn",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClassifierSpec::Logistic {
                l2_strength,
                max_iterations,
                tolerance,
            } => {
                if !l2_strength.is_finite() || l2_strength < 0.0 {
                    return Err(Error::domain("logistic l2_strength must be >= 0"));
                }
                if max_iterations == 0 {
                    return Err(Error::domain("logistic max_iterations must be >= 1"));
                }
                if !tolerance.is_finite() || tolerance <= 0.0 {
                    return Err(Error::domain("logistic tolerance must be > 0"));
                }
            }
            ClassifierSpec::Knn { k: 0 } => {
                return Err(Error::domain("knn k must be >= 1"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Minimum training samples required per class.
    pub fn min_samples_per_class(&self) -> usize {
        match self {
            ClassifierSpec::Knn { .. } => 1,
            _ => 2,
        }
    }
}

/// A fitted classifier of any family.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Logistic(LogisticModel),
    Lda(LdaModel),
    Qda(QdaModel),
    Gnb(GnbModel),
    Knn(KnnModel),
}

impl FittedModel {
    /// Minority scores: posterior log-odds for the parametric families, the
    /// minority vote fraction for kNN.
    pub fn predict_scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        match self {
            FittedModel::Logistic(m) => m.scores(features),
            FittedModel::Lda(m) => m.scores(features),
            FittedModel::Qda(m) => m.scores(features),
            FittedModel::Gnb(m) => m.scores(features),
            FittedModel::Knn(m) => m.scores(features),
        }
    }

    /// Decision threshold on the minority score: 0 for posterior log-odds,
    /// 0.5 for the kNN vote fraction. The boundary itself goes to majority.
    pub fn decision_threshold(&self) -> f64 {
        match self {
            FittedModel::Knn(_) => 0.5,
            _ => 0.0,
        }
    }

    pub fn predict(&self, features: &[Vec<f64>]) -> Result<Vec<Class>> {
        let threshold = self.decision_threshold();
        Ok(self
            .predict_scores(features)?
            .into_iter()
            .map(|s| {
                let minority = match self {
                    FittedModel::Knn(_) => s >= threshold,
                    _ => s > threshold,
                };
                if minority {
                    Class::Minority
                } else {
                    Class::Majority
                }
            })
            .collect())
    }
}

/// Fit a classifier to a dataset.
pub fn fit(spec: &ClassifierSpec, train: &Dataset) -> Result<FittedModel> {
    spec.validate()?;
    let n_minority = train.count(Class::Minority);
    let n_majority = train.count(Class::Majority);
    let need = spec.min_samples_per_class();
    if n_minority < need || n_majority < need {
        return Err(Error::Unfit(format!(
            "{} needs >= {need} samples per class, got {n_minority} minority / {n_majority} majority",
            spec.name()
        )));
    }
    Ok(match spec {
        ClassifierSpec::Logistic {
            l2_strength,
            max_iterations,
            tolerance,
        } => FittedModel::Logistic(LogisticModel::fit(
            train,
            *l2_strength,
            *max_iterations,
            *tolerance,
        )?),
        ClassifierSpec::Lda => FittedModel::Lda(LdaModel::fit(train)?),
        ClassifierSpec::Qda => FittedModel::Qda(QdaModel::fit(train)?),
        ClassifierSpec::Gnb => FittedModel::Gnb(GnbModel::fit(train)?),
        ClassifierSpec::Knn { k } => FittedModel::Knn(KnnModel::fit(train, *k)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{generate_dataset, make_gaussian_model, CovarianceProfile};

    #[test]
    fn spec_validation() {
        assert!(ClassifierSpec::Knn { k: 0 }.validate().is_err());
        assert!(ClassifierSpec::Logistic {
            l2_strength: -1.0,
            max_iterations: 10,
            tolerance: 1e-6
        }
        .validate()
        .is_err());
        assert!(ClassifierSpec::logistic_default().validate().is_ok());
    }

    #[test]
    fn fit_rejects_single_class_data() {
        let model = make_gaussian_model(3, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        let mut data = generate_dataset(&model, 20, 1.0, 1).unwrap();
        for l in &mut data.labels {
            *l = Class::Majority;
        }
        for spec in [
            ClassifierSpec::logistic_default(),
            ClassifierSpec::Lda,
            ClassifierSpec::Qda,
            ClassifierSpec::Gnb,
            ClassifierSpec::knn_default(),
        ] {
            assert!(fit(&spec, &data).is_err(), "{} accepted one-class data", spec.name());
        }
    }

    #[test]
    fn all_families_learn_separated_blobs() {
        let model = make_gaussian_model(6, 6.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        let train = generate_dataset(&model, 200, 1.0, 2).unwrap();
        for spec in [
            ClassifierSpec::logistic_default(),
            ClassifierSpec::Lda,
            ClassifierSpec::Qda,
            ClassifierSpec::Gnb,
            ClassifierSpec::knn_default(),
        ] {
            let fitted = fit(&spec, &train).unwrap();
            let predicted = fitted.predict(&train.features).unwrap();
            let correct = predicted
                .iter()
                .zip(&train.labels)
                .filter(|(a, b)| a == b)
                .count() as f64
                / train.len() as f64;
            assert!(correct >= 0.99, "{}: training accuracy {correct}", spec.name());
        }
    }
}
