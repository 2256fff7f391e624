//! Gaussian discriminant family: LDA (pooled diagonal covariance), QDA
//! (per-class full covariance with a ridge floor), and Gaussian naive Bayes
//! (per-class diagonal variances).
//!
//! All three carry the empirical log-prior ln(n_min / n_maj) in their
//! scores, so the decision boundary shifts by exactly ln(eta_hat) relative
//! to the balanced fit.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::simulate::{Class, Dataset};
use crate::classifiers::triplet::VARIANCE_FLOOR_FRACTION;

struct ClassSplit {
    minority: Vec<usize>,
    majority: Vec<usize>,
}

fn split(train: &Dataset) -> ClassSplit {
    let mut minority = Vec::new();
    let mut majority = Vec::new();
    for (i, label) in train.labels.iter().enumerate() {
        match label {
            Class::Minority => minority.push(i),
            Class::Majority => majority.push(i),
        }
    }
    ClassSplit { minority, majority }
}

fn class_mean(train: &Dataset, idx: &[usize]) -> Vec<f64> {
    let p = train.dim();
    let mut mean = vec![0.0; p];
    for &i in idx {
        for (m, &v) in mean.iter_mut().zip(&train.features[i]) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= idx.len() as f64;
    }
    mean
}

/// Pooled within-class diagonal variance with the standard floor.
fn pooled_diagonal_variance(train: &Dataset, s: &ClassSplit, mu_min: &[f64], mu_maj: &[f64]) -> Vec<f64> {
    let p = train.dim();
    let n = train.len();
    let mut var = vec![0.0; p];
    for &i in &s.minority {
        for j in 0..p {
            let d = train.features[i][j] - mu_min[j];
            var[j] += d * d;
        }
    }
    for &i in &s.majority {
        for j in 0..p {
            let d = train.features[i][j] - mu_maj[j];
            var[j] += d * d;
        }
    }
    let denom = (n.saturating_sub(2)).max(1) as f64;
    for v in &mut var {
        *v /= denom;
    }
    apply_floor(&mut var);
    var
}

/// Floor each variance at `VARIANCE_FLOOR_FRACTION` times the mean variance
/// (absolute fallback when everything is degenerate).
fn apply_floor(var: &mut [f64]) {
    let mean = var.iter().sum::<f64>() / var.len() as f64;
    let floor = (VARIANCE_FLOOR_FRACTION * mean).max(1e-12);
    for v in var.iter_mut() {
        if *v < floor {
            *v = floor;
        }
    }
}

fn log_prior_odds(s: &ClassSplit) -> f64 {
    (s.minority.len() as f64 / s.majority.len() as f64).ln()
}

/// Linear discriminant with pooled diagonal covariance.
#[derive(Debug, Clone)]
pub struct LdaModel {
    pub mu_minority: Vec<f64>,
    pub mu_majority: Vec<f64>,
    pub variance: Vec<f64>,
    pub log_prior_odds: f64,
}

impl LdaModel {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let s = split(train);
        let mu_minority = class_mean(train, &s.minority);
        let mu_majority = class_mean(train, &s.majority);
        let variance = pooled_diagonal_variance(train, &s, &mu_minority, &mu_majority);
        Ok(LdaModel {
            mu_minority,
            mu_majority,
            variance,
            log_prior_odds: log_prior_odds(&s),
        })
    }

    /// Minority posterior log-odds.
    pub fn scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = self.mu_minority.len();
        features
            .iter()
            .map(|x| {
                check_dim(x, p)?;
                let mut score = self.log_prior_odds;
                for (j, &xj) in x.iter().enumerate() {
                    let gap = self.mu_minority[j] - self.mu_majority[j];
                    let mid = 0.5 * (self.mu_minority[j] + self.mu_majority[j]);
                    score += gap * (xj - mid) / self.variance[j];
                }
                Ok(score)
            })
            .collect()
    }
}

/// Quadratic discriminant with per-class full covariances, each ridged by
/// the variance floor so tiny minority counts stay solvable.
#[derive(Debug, Clone)]
pub struct QdaModel {
    mu_minority: DVector<f64>,
    mu_majority: DVector<f64>,
    chol_minority: Cholesky<f64, nalgebra::Dyn>,
    chol_majority: Cholesky<f64, nalgebra::Dyn>,
    log_det_minority: f64,
    log_det_majority: f64,
    log_prior_odds: f64,
}

fn class_covariance(train: &Dataset, idx: &[usize], mean: &[f64], ridge: f64) -> DMatrix<f64> {
    let p = train.dim();
    let mut cov = DMatrix::zeros(p, p);
    for &i in idx {
        let row = &train.features[i];
        for a in 0..p {
            let da = row[a] - mean[a];
            for b in a..p {
                cov[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    let denom = (idx.len().saturating_sub(1)).max(1) as f64;
    for a in 0..p {
        for b in a..p {
            cov[(a, b)] /= denom;
            cov[(b, a)] = cov[(a, b)];
        }
    }
    for a in 0..p {
        cov[(a, a)] += ridge;
    }
    cov
}

impl QdaModel {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let s = split(train);
        let p = train.dim();
        let mu_min = class_mean(train, &s.minority);
        let mu_maj = class_mean(train, &s.majority);

        // Ridge scale from the pooled variance level.
        let pooled = pooled_diagonal_variance(train, &s, &mu_min, &mu_maj);
        let mean_var = pooled.iter().sum::<f64>() / p as f64;
        let ridge = (VARIANCE_FLOOR_FRACTION * mean_var).max(1e-12);

        let cov_min = class_covariance(train, &s.minority, &mu_min, ridge);
        let cov_maj = class_covariance(train, &s.majority, &mu_maj, ridge);
        let chol_minority = Cholesky::new(cov_min)
            .ok_or_else(|| Error::Numeric("qda minority covariance singular after ridge".into()))?;
        let chol_majority = Cholesky::new(cov_maj)
            .ok_or_else(|| Error::Numeric("qda majority covariance singular after ridge".into()))?;
        let log_det = |c: &Cholesky<f64, nalgebra::Dyn>| {
            2.0 * c.l().diagonal().iter().map(|d| d.ln()).sum::<f64>()
        };
        Ok(QdaModel {
            log_det_minority: log_det(&chol_minority),
            log_det_majority: log_det(&chol_majority),
            mu_minority: DVector::from_vec(mu_min),
            mu_majority: DVector::from_vec(mu_maj),
            chol_minority,
            chol_majority,
            log_prior_odds: log_prior_odds(&s),
        })
    }

    pub fn scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = self.mu_minority.len();
        features
            .iter()
            .map(|x| {
                check_dim(x, p)?;
                let v = DVector::from_column_slice(x);
                let d_min = &v - &self.mu_minority;
                let d_maj = &v - &self.mu_majority;
                let q_min = d_min.dot(&self.chol_minority.solve(&d_min));
                let q_maj = d_maj.dot(&self.chol_majority.solve(&d_maj));
                Ok(self.log_prior_odds - 0.5 * (q_min - q_maj)
                    - 0.5 * (self.log_det_minority - self.log_det_majority))
            })
            .collect()
    }
}

/// Naive Bayes with per-class, per-feature Gaussian likelihoods.
#[derive(Debug, Clone)]
pub struct GnbModel {
    pub mu_minority: Vec<f64>,
    pub mu_majority: Vec<f64>,
    pub var_minority: Vec<f64>,
    pub var_majority: Vec<f64>,
    pub log_prior_odds: f64,
}

fn class_diag_variance(train: &Dataset, idx: &[usize], mean: &[f64]) -> Vec<f64> {
    let p = train.dim();
    let mut var = vec![0.0; p];
    for &i in idx {
        for j in 0..p {
            let d = train.features[i][j] - mean[j];
            var[j] += d * d;
        }
    }
    let denom = (idx.len().saturating_sub(1)).max(1) as f64;
    for v in &mut var {
        *v /= denom;
    }
    apply_floor(&mut var);
    var
}

impl GnbModel {
    pub fn fit(train: &Dataset) -> Result<Self> {
        let s = split(train);
        let mu_minority = class_mean(train, &s.minority);
        let mu_majority = class_mean(train, &s.majority);
        let var_minority = class_diag_variance(train, &s.minority, &mu_minority);
        let var_majority = class_diag_variance(train, &s.majority, &mu_majority);
        Ok(GnbModel {
            mu_minority,
            mu_majority,
            var_minority,
            var_majority,
            log_prior_odds: log_prior_odds(&s),
        })
    }

    pub fn scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = self.mu_minority.len();
        features
            .iter()
            .map(|x| {
                check_dim(x, p)?;
                let mut score = self.log_prior_odds;
                for (j, &xj) in x.iter().enumerate() {
                    let d_min = xj - self.mu_minority[j];
                    let d_maj = xj - self.mu_majority[j];
                    score += -0.5 * (d_min * d_min / self.var_minority[j]
                        - d_maj * d_maj / self.var_majority[j])
                        - 0.5 * (self.var_minority[j].ln() - self.var_majority[j].ln());
                }
                Ok(score)
            })
            .collect()
    }
}

fn check_dim(x: &[f64], p: usize) -> Result<()> {
    if x.len() != p {
        return Err(Error::Input(format!(
            "feature dimension {} does not match model dimension {p}",
            x.len()
        )));
    }
    Ok(())
}
