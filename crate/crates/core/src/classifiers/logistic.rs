//! L2-penalized logistic regression fitted by iteratively reweighted least
//! squares (Newton steps with step halving).

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::simulate::{Class, Dataset};

/// Fitted logistic model; the intercept is the last coefficient and is not
/// penalized, so the imbalance enters through it untouched.
#[derive(Debug, Clone)]
pub struct LogisticModel {
    /// p feature weights followed by the intercept.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    pub final_gradient_norm: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Penalized negative log-likelihood; y = 1 for minority.
fn nll(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, l2: f64) -> f64 {
    let z = x * beta;
    let mut total = 0.0;
    for i in 0..y.len() {
        // log(1 + exp(z)) - y*z, stably.
        let zi = z[i];
        let log1pexp = if zi > 0.0 { zi + (-zi).exp().ln_1p() } else { zi.exp().ln_1p() };
        total += log1pexp - y[i] * zi;
    }
    let p = beta.len() - 1;
    let penalty: f64 = beta.rows(0, p).iter().map(|b| b * b).sum();
    total + 0.5 * l2 * penalty
}

impl LogisticModel {
    pub fn fit(train: &Dataset, l2: f64, max_iterations: usize, tolerance: f64) -> Result<Self> {
        let n = train.len();
        let p = train.dim();
        let mut x = DMatrix::zeros(n, p + 1);
        let mut y = DVector::zeros(n);
        for (i, (row, label)) in train.features.iter().zip(&train.labels).enumerate() {
            for (j, &v) in row.iter().enumerate() {
                x[(i, j)] = v;
            }
            x[(i, p)] = 1.0;
            y[i] = if *label == Class::Minority { 1.0 } else { 0.0 };
        }

        let mut beta = DVector::zeros(p + 1);
        let mut objective = nll(&x, &y, &beta, l2);
        let mut grad_norm = f64::INFINITY;
        let mut iterations = 0;

        for iter in 0..max_iterations {
            iterations = iter + 1;
            let z = &x * &beta;
            let probs: DVector<f64> = z.map(sigmoid);
            let mut grad = x.transpose() * (&probs - &y);
            for j in 0..p {
                grad[j] += l2 * beta[j];
            }
            grad_norm = grad.amax();
            if grad_norm <= tolerance {
                break;
            }

            // Hessian X^T W X + l2 on the weight block.
            let weights: Vec<f64> = probs.iter().map(|&q| (q * (1.0 - q)).max(1e-12)).collect();
            let mut hessian = DMatrix::zeros(p + 1, p + 1);
            for a in 0..=p {
                for b in a..=p {
                    let mut acc = 0.0;
                    for i in 0..n {
                        acc += x[(i, a)] * weights[i] * x[(i, b)];
                    }
                    hessian[(a, b)] = acc;
                    hessian[(b, a)] = acc;
                }
            }
            for j in 0..p {
                hessian[(j, j)] += l2;
            }
            hessian[(p, p)] += 1e-12;

            let step = Cholesky::new(hessian)
                .ok_or_else(|| Error::Numeric("logistic Hessian not positive definite".into()))?
                .solve(&grad);

            // Step halving keeps the penalized NLL non-increasing.
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let candidate = &beta - &step * scale;
                let candidate_obj = nll(&x, &y, &candidate, l2);
                if candidate_obj <= objective {
                    beta = candidate;
                    objective = candidate_obj;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        Ok(LogisticModel {
            coefficients: beta.iter().copied().collect(),
            iterations,
            final_gradient_norm: grad_norm,
        })
    }

    /// Minority log-odds per row.
    pub fn scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = self.coefficients.len() - 1;
        features
            .iter()
            .map(|x| {
                if x.len() != p {
                    return Err(Error::Input(format!(
                        "feature dimension {} does not match model dimension {p}",
                        x.len()
                    )));
                }
                Ok(x.iter()
                    .zip(&self.coefficients[..p])
                    .map(|(xi, wi)| xi * wi)
                    .sum::<f64>()
                    + self.coefficients[p])
            })
            .collect()
    }
}
