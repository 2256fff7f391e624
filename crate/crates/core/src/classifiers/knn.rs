//! Brute-force k-nearest-neighbors with the minority vote fraction as the
//! score.

use crate::error::{Error, Result};
use crate::simulate::{Class, Dataset};

#[derive(Debug, Clone)]
pub struct KnnModel {
    train_features: Vec<Vec<f64>>,
    train_labels: Vec<Class>,
    k: usize,
}

impl KnnModel {
    pub fn fit(train: &Dataset, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("knn k must be >= 1"));
        }
        Ok(KnnModel {
            train_features: train.features.clone(),
            train_labels: train.labels.clone(),
            // Never ask for more neighbors than stored points.
            k: k.min(train.len()),
        })
    }

    /// Fraction of minority labels among the k nearest training points.
    pub fn scores(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        let p = self.train_features[0].len();
        features
            .iter()
            .map(|x| {
                if x.len() != p {
                    return Err(Error::Input(format!(
                        "feature dimension {} does not match model dimension {p}",
                        x.len()
                    )));
                }
                let mut dists: Vec<(f64, Class)> = self
                    .train_features
                    .iter()
                    .zip(&self.train_labels)
                    .map(|(t, &l)| {
                        let d2: f64 = t.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                        (d2, l)
                    })
                    .collect();
                dists.select_nth_unstable_by(self.k - 1, |a, b| {
                    a.0.partial_cmp(&b.0).expect("finite distances")
                });
                let minority_votes = dists[..self.k]
                    .iter()
                    .filter(|(_, l)| *l == Class::Minority)
                    .count();
                Ok(minority_votes as f64 / self.k as f64)
            })
            .collect()
    }
}
