//! Plug-in estimation of the (eta, kappa, delta) triplet from labeled data.

use crate::error::{Error, Result};
use crate::simulate::{Class, Dataset};

/// Relative variance floor shared by the discriminant fits and the triplet
/// estimator: each variance is floored at this fraction of the mean pooled
/// variance.
pub const VARIANCE_FLOOR_FRACTION: f64 = 1e-6;

/// Empirical triplet, canonically oriented (eta_hat >= 1).
#[derive(Debug, Clone, Copy)]
pub struct TripletEstimate {
    pub eta_hat: f64,
    pub kappa_hat: f64,
    pub delta_hat: f64,
}

/// Estimate eta from counts, kappa as n/p, and delta as the plug-in
/// Mahalanobis distance under a pooled, floored diagonal covariance.
pub fn estimate_triplet(data: &Dataset) -> Result<TripletEstimate> {
    let n = data.len();
    let p = data.dim();
    if n == 0 || p == 0 {
        return Err(Error::input("estimate_triplet: empty dataset"));
    }
    let n_minority = data.count(Class::Minority);
    let n_majority = n - n_minority;
    if n_minority == 0 || n_majority == 0 {
        return Err(Error::Unfit(
            "estimate_triplet: both classes must be present".into(),
        ));
    }

    let mut mean = [vec![0.0; p], vec![0.0; p]];
    for (x, label) in data.features.iter().zip(&data.labels) {
        let k = label.label() as usize;
        for j in 0..p {
            mean[k][j] += x[j];
        }
    }
    let counts = [n_minority as f64, n_majority as f64];
    for (m, &count) in mean.iter_mut().zip(&counts) {
        for v in m.iter_mut() {
            *v /= count;
        }
    }

    let mut var = vec![0.0; p];
    for (x, label) in data.features.iter().zip(&data.labels) {
        let k = label.label() as usize;
        for j in 0..p {
            let d = x[j] - mean[k][j];
            var[j] += d * d;
        }
    }
    let denom = (n.saturating_sub(2)).max(1) as f64;
    let mean_var = var.iter().sum::<f64>() / (denom * p as f64);
    let floor = (VARIANCE_FLOOR_FRACTION * mean_var).max(1e-12);
    let delta_hat = (0..p)
        .map(|j| {
            let gap = mean[1][j] - mean[0][j];
            gap * gap / (var[j] / denom).max(floor)
        })
        .sum::<f64>()
        .sqrt();

    // Canonical orientation: eta_hat is always the larger count over the
    // smaller, even if the labels are swapped in the file.
    let (hi, lo) = if n_majority >= n_minority {
        (n_majority, n_minority)
    } else {
        (n_minority, n_majority)
    };
    Ok(TripletEstimate {
        eta_hat: hi as f64 / lo as f64,
        kappa_hat: n as f64 / p as f64,
        delta_hat,
    })
}
