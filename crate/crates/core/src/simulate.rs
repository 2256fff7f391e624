//! Monte Carlo oracles for the closed forms and a controlled Gaussian data
//! generator.
//!
//! All randomness flows through ChaCha8 streams derived from
//! `(master_seed, task_index)`, so concurrent sweeps stay bitwise
//! reproducible regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::landscape::{Priors, TripletPoint};
use crate::specfun::Probability;

/// Class identity; `Minority` is always the class whose error grows with
/// imbalance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Minority,
    Majority,
}

impl Class {
    pub fn label(self) -> u8 {
        match self {
            Class::Minority => 0,
            Class::Majority => 1,
        }
    }
}

/// Independent reproducible stream for one logical task.
pub fn task_rng(master_seed: u64, task_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(task_index);
    rng
}

/// Homoscedastic two-Gaussian generative model with diagonal covariance.
#[derive(Debug, Clone)]
pub struct GaussianModel {
    pub mu_minority: Vec<f64>,
    pub mu_majority: Vec<f64>,
    pub covariance_diagonal: Vec<f64>,
    pub priors: Priors<f64>,
}

impl GaussianModel {
    pub fn dim(&self) -> usize {
        self.mu_minority.len()
    }

    /// Mahalanobis distance between the class means under the diagonal
    /// covariance.
    pub fn mahalanobis(&self) -> f64 {
        self.mu_majority
            .iter()
            .zip(&self.mu_minority)
            .zip(&self.covariance_diagonal)
            .map(|((a, b), v)| (a - b) * (a - b) / v)
            .sum::<f64>()
            .sqrt()
    }
}

/// Diagonal covariance profile for [`make_gaussian_model`].
#[derive(Debug, Clone)]
pub enum CovarianceProfile {
    Isotropic,
    Diagonal(Vec<f64>),
}

/// Labeled sample matrix with generation provenance.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Row-major n x p feature matrix.
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Class>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub seed: u64,
    pub n_majority: usize,
    pub n_minority: usize,
    pub eta: f64,
    pub dim: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn count(&self, class: Class) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }
}

/// Monte Carlo estimate with its 95% Wilson score interval.
///
/// The Wilson interval keeps sane coverage at extreme probabilities: with
/// zero observed hits the Wald interval collapses to a point and can never
/// bracket a tiny true value, while Wilson's upper bound stays at
/// z^2/(n+z^2).
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub estimate: Probability<f64>,
    pub lo_95: f64,
    pub hi_95: f64,
    pub half_width_95: f64,
    pub n_samples: usize,
}

impl McEstimate {
    fn from_count(hits: usize, n: usize) -> Self {
        let p = hits as f64 / n as f64;
        let z = 1.96;
        let nf = n as f64;
        let z2n = z * z / nf;
        let center = (p + z2n / 2.0) / (1.0 + z2n);
        let half = (z / (1.0 + z2n)) * (p * (1.0 - p) / nf + z2n / (4.0 * nf)).sqrt();
        // Analytically lo = 0 when p = 0 and hi = 1 when p = 1, but the
        // arithmetic can round just past the point estimate; the interval
        // must always contain it.
        McEstimate {
            estimate: Probability::new(p).expect("fraction is a probability"),
            lo_95: (center - half).max(0.0).min(p),
            hi_95: (center + half).min(1.0).max(p),
            half_width_95: half,
            n_samples: n,
        }
    }

    /// True when `value` lies within the 95% interval.
    pub fn brackets(&self, value: f64) -> bool {
        (self.lo_95..=self.hi_95).contains(&value)
    }
}

/// i.i.d. draws of the 1-D discriminant score for one class:
/// N(+d^2/2, d^2) for majority, N(-d^2/2, d^2) for minority.
pub fn sample_scores(n: usize, class: Class, delta_eff: f64, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample_scores: n must be >= 1"));
    }
    if !delta_eff.is_finite() || delta_eff <= 0.0 {
        return Err(Error::Domain(format!("sample_scores: delta_eff must be > 0, got {delta_eff}")));
    }
    let mean = match class {
        Class::Majority => delta_eff * delta_eff / 2.0,
        Class::Minority => -delta_eff * delta_eff / 2.0,
    };
    let dist = Normal::new(mean, delta_eff)
        .map_err(|e| Error::Numeric(format!("score distribution: {e}")))?;
    let mut rng = task_rng(seed, class.label() as u64);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

/// Monte Carlo class-conditional errors of the 1-D Bayes rule.
///
/// With the centered score T (majority-favoring direction), the rule
/// predicts majority when T >= -ln(eta); the minority error is the
/// minority-conditional mass at or above that threshold. This is the
/// threshold orientation consistent with the closed forms: raising eta
/// lowers the threshold and grows the minority error.
///
/// Returns `(minority, majority)` estimates.
pub fn mc_class_errors(
    n_per_class: usize,
    point: &TripletPoint<f64>,
    seed: u64,
) -> Result<(McEstimate, McEstimate)> {
    if n_per_class < 1_000 {
        return Err(Error::domain("mc_class_errors: n_per_class must be >= 1000"));
    }
    let d = point.effective_margin();
    let threshold = -point.eta().ln();
    let minority = sample_scores(n_per_class, Class::Minority, d, seed)?;
    let majority = sample_scores(n_per_class, Class::Majority, d, seed)?;
    let minority_errors = minority.iter().filter(|&&t| t >= threshold).count();
    let majority_errors = majority.iter().filter(|&&t| t < threshold).count();
    Ok((
        McEstimate::from_count(minority_errors, n_per_class),
        McEstimate::from_count(majority_errors, n_per_class),
    ))
}

/// Build a homoscedastic diagonal-covariance model hitting the requested
/// Mahalanobis separation exactly.
///
/// The mean offset sits on the first axis, scaled by that axis' standard
/// deviation so the Mahalanobis distance equals `delta` regardless of the
/// covariance profile. Means are placed at -+offset/2 (minority negative).
pub fn make_gaussian_model(
    p: usize,
    delta: f64,
    covariance_profile: &CovarianceProfile,
    eta: f64,
) -> Result<GaussianModel> {
    if p == 0 {
        return Err(Error::domain("make_gaussian_model: p must be >= 1"));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::Domain(format!("make_gaussian_model: delta must be > 0, got {delta}")));
    }
    let cov = match covariance_profile {
        CovarianceProfile::Isotropic => vec![1.0; p],
        CovarianceProfile::Diagonal(entries) => {
            if entries.len() != p {
                return Err(Error::Input(format!(
                    "covariance has {} entries for dimension {p}",
                    entries.len()
                )));
            }
            if entries.iter().any(|&v| !v.is_finite() || v <= 0.0) {
                return Err(Error::domain("covariance entries must be positive and finite"));
            }
            entries.clone()
        }
    };
    let offset = delta * cov[0].sqrt();
    let mut mu_minority = vec![0.0; p];
    let mut mu_majority = vec![0.0; p];
    mu_minority[0] = -offset / 2.0;
    mu_majority[0] = offset / 2.0;
    let priors = TripletPoint::new(eta, 1.0, delta)?.priors();
    Ok(GaussianModel {
        mu_minority,
        mu_majority,
        covariance_diagonal: cov,
        priors,
    })
}

/// Sample an imbalanced dataset: `n_majority` majority rows plus
/// `max(1, round(n_majority / eta))` minority rows, deterministically
/// shuffled.
pub fn generate_dataset(
    model: &GaussianModel,
    n_majority: usize,
    eta: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_majority == 0 {
        return Err(Error::domain("generate_dataset: n_majority must be >= 1"));
    }
    if !eta.is_finite() || eta < 1.0 {
        return Err(Error::Domain(format!("generate_dataset: eta must be >= 1, got {eta}")));
    }
    let n_minority = ((n_majority as f64 / eta).round() as usize).max(1);
    let p = model.dim();

    let mut rows: Vec<(Vec<f64>, Class)> = Vec::with_capacity(n_majority + n_minority);
    let mut rng = task_rng(seed, 0);
    let sds: Vec<f64> = model.covariance_diagonal.iter().map(|v| v.sqrt()).collect();
    let draw = |mu: &[f64], rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..p)
            .map(|j| {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                mu[j] + sds[j] * z
            })
            .collect()
    };
    for _ in 0..n_majority {
        let x = draw(&model.mu_majority, &mut rng);
        rows.push((x, Class::Majority));
    }
    for _ in 0..n_minority {
        let x = draw(&model.mu_minority, &mut rng);
        rows.push((x, Class::Minority));
    }
    // Fisher-Yates on a stream independent of the sampling stream.
    let mut shuffle_rng = task_rng(seed, 1);
    for i in (1..rows.len()).rev() {
        let j = shuffle_rng.gen_range(0..=i);
        rows.swap(i, j);
    }
    let (features, labels) = rows.into_iter().unzip();
    Ok(Dataset {
        features,
        labels,
        provenance: Provenance {
            seed,
            n_majority,
            n_minority,
            eta,
            dim: p,
        },
    })
}

/// Apply the population Bayes linear discriminant (true parameters plus the
/// ln(eta) prior shift). Ties at the boundary go to the majority class.
pub fn population_bayes_classify(
    features: &[Vec<f64>],
    model: &GaussianModel,
    eta: f64,
) -> Result<Vec<Class>> {
    if !eta.is_finite() || eta < 1.0 {
        return Err(Error::Domain(format!("eta must be >= 1, got {eta}")));
    }
    let p = model.dim();
    let w: Vec<f64> = (0..p)
        .map(|j| (model.mu_majority[j] - model.mu_minority[j]) / model.covariance_diagonal[j])
        .collect();
    let midpoint_term: f64 = (0..p)
        .map(|j| {
            0.5 * (model.mu_majority[j] + model.mu_minority[j])
                * (model.mu_majority[j] - model.mu_minority[j])
                / model.covariance_diagonal[j]
        })
        .sum();
    let shift = eta.ln();
    features
        .iter()
        .map(|x| {
            if x.len() != p {
                return Err(Error::Input(format!(
                    "feature dimension {} does not match model dimension {p}",
                    x.len()
                )));
            }
            let score: f64 = x.iter().zip(&w).map(|(xi, wi)| xi * wi).sum::<f64>()
                - midpoint_term
                + shift;
            Ok(if score >= 0.0 { Class::Majority } else { Class::Minority })
        })
        .collect()
}

/// Write a dataset as CSV: `feature_0,...,feature_{p-1},label`, with label
/// 0 = minority, 1 = majority.
pub fn write_dataset_csv(dataset: &Dataset, path: &std::path::Path) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let p = dataset.dim();
    let header: Vec<String> = (0..p)
        .map(|j| format!("feature_{j}"))
        .chain(std::iter::once("label".to_string()))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (x, label) in dataset.features.iter().zip(&dataset.labels) {
        let mut row: Vec<String> = x.iter().map(|v| crate::csvfmt::sig9(*v)).collect();
        row.push(label.label().to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Read a dataset written by [`write_dataset_csv`].
pub fn read_dataset_csv(path: &std::path::Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::input("dataset file is empty"))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.last() != Some(&"label") || cols.len() < 2 {
        return Err(Error::input("dataset header must end with a `label` column"));
    }
    let p = cols.len() - 1;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != p + 1 {
            return Err(Error::Input(format!("row {}: expected {} fields, got {}", i + 2, p + 1, fields.len())));
        }
        let mut row = Vec::with_capacity(p);
        for f in &fields[..p] {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::Input(format!("row {}: bad number `{f}`", i + 2)))?;
            if !v.is_finite() {
                return Err(Error::Input(format!("row {}: non-finite feature", i + 2)));
            }
            row.push(v);
        }
        let label = match fields[p] {
            "0" => Class::Minority,
            "1" => Class::Majority,
            other => return Err(Error::Input(format!("row {}: bad label `{other}`", i + 2))),
        };
        features.push(row);
        labels.push(label);
    }
    if features.is_empty() {
        return Err(Error::input("dataset has no rows"));
    }
    let n = features.len();
    let n_minority = labels.iter().filter(|&&l| l == Class::Minority).count();
    let n_majority = n - n_minority;
    Ok(Dataset {
        features,
        labels,
        provenance: Provenance {
            seed: 0,
            n_majority,
            n_minority,
            eta: if n_minority > 0 { n_majority as f64 / n_minority as f64 } else { f64::INFINITY },
            dim: p,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_scores_moments() {
        let scores = sample_scores(1_000_000, Class::Majority, 2.0, 7).unwrap();
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        assert!((mean - 2.0).abs() < 3.0 * 2.0 / 1e3, "mean {mean}");
        let minority = sample_scores(1_000_000, Class::Minority, 2.0, 7).unwrap();
        let m = minority.iter().sum::<f64>() / minority.len() as f64;
        let var = minority.iter().map(|s| (s - m) * (s - m)).sum::<f64>()
            / (minority.len() - 1) as f64;
        assert!((var - 4.0).abs() < 0.2, "variance {var}");
    }

    #[test]
    fn sample_scores_deterministic() {
        let a = sample_scores(512, Class::Minority, 1.5, 42).unwrap();
        let b = sample_scores(512, Class::Minority, 1.5, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_scores(512, Class::Minority, 1.5, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_scores_rejects_bad_params() {
        assert!(sample_scores(0, Class::Minority, 1.0, 0).is_err());
        assert!(sample_scores(10, Class::Minority, 0.0, 0).is_err());
    }

    #[test]
    fn mc_errors_agree_with_closed_form() {
        let point = TripletPoint::new(1.0, 1.0, 2.0).unwrap();
        let (e_min, _) = mc_class_errors(1_000_000, &point, 11).unwrap();
        assert!((e_min.estimate.value() - 0.158655).abs() < 0.0011);

        let point = TripletPoint::new(std::f64::consts::E.powi(2), 1.0, 2.0).unwrap();
        let (e_min, e_maj) = mc_class_errors(1_000_000, &point, 11).unwrap();
        assert!((e_min.estimate.value() - 0.5).abs() < 0.0015);
        assert!((e_maj.estimate.value() - 0.0227501).abs() < 0.0005);
    }

    #[test]
    fn mc_errors_reject_small_n() {
        let point = TripletPoint::new(2.0, 1.0, 2.0).unwrap();
        assert!(mc_class_errors(10, &point, 0).is_err());
    }

    #[test]
    fn model_construction_hits_delta() {
        let m = make_gaussian_model(1, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        assert_eq!(m.mu_minority[0], -1.0);
        assert_eq!(m.mu_majority[0], 1.0);
        assert_eq!(m.covariance_diagonal[0], 1.0);

        let m = make_gaussian_model(50, 2.0, &CovarianceProfile::Isotropic, 10.0).unwrap();
        assert!((m.mahalanobis() - 2.0).abs() < 1e-9);

        let mut cov = vec![1.0; 8];
        cov[0] = 4.0;
        let m = make_gaussian_model(8, 2.0, &CovarianceProfile::Diagonal(cov), 1.0).unwrap();
        // Variance 4 on the offset axis doubles the raw offset.
        assert!((m.mu_majority[0] - m.mu_minority[0] - 4.0).abs() < 1e-12);
        assert!((m.mahalanobis() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn model_rejects_bad_covariance() {
        assert!(
            make_gaussian_model(2, 2.0, &CovarianceProfile::Diagonal(vec![1.0, 0.0]), 1.0).is_err()
        );
        assert!(
            make_gaussian_model(2, 2.0, &CovarianceProfile::Diagonal(vec![1.0]), 1.0).is_err()
        );
    }

    #[test]
    fn dataset_counts_and_determinism() {
        let model = make_gaussian_model(5, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        let d = generate_dataset(&model, 200, 1.0, 3).unwrap();
        assert_eq!(d.count(Class::Majority), 200);
        assert_eq!(d.count(Class::Minority), 200);

        let d = generate_dataset(&model, 200, 100.0, 3).unwrap();
        assert_eq!(d.count(Class::Majority), 200);
        assert_eq!(d.count(Class::Minority), 2);

        let a = generate_dataset(&model, 50, 5.0, 9).unwrap();
        let b = generate_dataset(&model, 50, 5.0, 9).unwrap();
        assert_eq!(a.features, b.features);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn bayes_classifier_boundary_and_error_rate() {
        let model = make_gaussian_model(10, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        // Exact midpoint of the means scores 0 and ties to majority.
        let midpoint: Vec<f64> = (0..10).map(|_| 0.0).collect();
        let labels = population_bayes_classify(&[midpoint], &model, 1.0).unwrap();
        assert_eq!(labels[0], Class::Majority);

        let test = generate_dataset(&model, 100_000, 1.0, 21).unwrap();
        let predicted = population_bayes_classify(&test.features, &model, 1.0).unwrap();
        let wrong = predicted
            .iter()
            .zip(&test.labels)
            .filter(|(a, b)| a != b)
            .count() as f64
            / test.len() as f64;
        // Population Bayes error Phi(-1) with a 3-sigma binomial band.
        let sigma = (0.158655 * (1.0 - 0.158655) / test.len() as f64).sqrt();
        assert!((wrong - 0.158655).abs() < 3.0 * sigma, "rate {wrong}");
    }

    #[test]
    fn bayes_classifier_collapses_at_huge_eta() {
        let model = make_gaussian_model(4, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        let test = generate_dataset(&model, 2_000, 1.0, 5).unwrap();
        let predicted = population_bayes_classify(&test.features, &model, 1e12).unwrap();
        assert!(predicted.iter().all(|&c| c == Class::Majority));
    }

    #[test]
    fn bayes_classifier_rejects_dim_mismatch() {
        let model = make_gaussian_model(3, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        assert!(population_bayes_classify(&[vec![0.0; 2]], &model, 1.0).is_err());
    }

    #[test]
    fn empirical_mahalanobis_converges() {
        let model = make_gaussian_model(20, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
        for (n, tol) in [(1_000, 0.25), (10_000, 0.08), (100_000, 0.03)] {
            let d = generate_dataset(&model, n, 1.0, 77).unwrap();
            let p = d.dim();
            let mut sums = [vec![0.0; p], vec![0.0; p]];
            let mut counts = [0usize; 2];
            for (x, label) in d.features.iter().zip(&d.labels) {
                let k = label.label() as usize;
                counts[k] += 1;
                for j in 0..p {
                    sums[k][j] += x[j];
                }
            }
            let dist: f64 = (0..p)
                .map(|j| {
                    let gap = sums[1][j] / counts[1] as f64 - sums[0][j] / counts[0] as f64;
                    gap * gap / model.covariance_diagonal[j]
                })
                .sum::<f64>()
                .sqrt();
            assert!((dist - 2.0).abs() < tol, "n={n}: {dist}");
        }
    }

    #[test]
    fn dataset_csv_round_trip() {
        let model = make_gaussian_model(3, 2.0, &CovarianceProfile::Isotropic, 4.0).unwrap();
        let d = generate_dataset(&model, 40, 4.0, 13).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        write_dataset_csv(&d, &path).unwrap();
        let back = read_dataset_csv(&path).unwrap();
        assert_eq!(back.labels, d.labels);
        assert_eq!(back.dim(), 3);
        for (a, b) in back.features.iter().zip(&d.features) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-7 * y.abs().max(1.0));
            }
        }
    }
}
