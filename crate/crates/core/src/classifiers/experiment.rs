//! Controlled-imbalance experiment: fixed majority count, minority
//! subsampled to each eta, fixed test set per seed.

use std::path::Path;

use crate::classifiers::{evaluate, fit, ClassifierSpec, ConfusionMatrix};
use crate::csvfmt::sig9;
use crate::error::{Error, Result};
use crate::metrics::MetricBundle;
use crate::simulate::{generate_dataset, make_gaussian_model, CovarianceProfile, GaussianModel};

/// How the evaluation set is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TestDesign {
    /// One balanced test set per seed, reused across the whole eta grid, so
    /// metric movement reflects training imbalance only. Default.
    #[default]
    Balanced,
    /// Test set regenerated at each eta with the same imbalance as training.
    MatchedImbalance,
}

impl TestDesign {
    pub fn as_str(&self) -> &'static str {
        match self {
            TestDesign::Balanced => "balanced",
            TestDesign::MatchedImbalance => "matched_imbalance",
        }
    }
}

/// Full experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub delta: f64,
    pub p: usize,
    pub n_majority_train: usize,
    pub n_test_per_class: usize,
    pub eta_grid: Vec<f64>,
    pub seeds: Vec<u64>,
    pub models: Vec<ClassifierSpec>,
    pub test_design: TestDesign,
    pub output_path: String,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let delta_bad = !self.delta.is_finite() || self.delta <= 0.0;
        if delta_bad || self.p == 0 || self.n_majority_train == 0 || self.n_test_per_class == 0 {
            return Err(Error::input(
                "experiment config needs delta > 0, p >= 1, n_majority_train >= 1, n_test_per_class >= 1",
            ));
        }
        if self.eta_grid.is_empty() || self.eta_grid.iter().any(|&e| e < 1.0) {
            return Err(Error::input("eta_grid must be non-empty with every eta >= 1"));
        }
        if self.eta_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("eta_grid must be strictly ascending"));
        }
        if self.seeds.is_empty() {
            return Err(Error::input("seeds must be non-empty"));
        }
        if self.models.is_empty() {
            return Err(Error::input("models must be non-empty"));
        }
        for spec in &self.models {
            spec.validate()?;
        }
        Ok(())
    }
}

/// One (model, eta, seed) cell of the experiment.
#[derive(Debug, Clone)]
pub struct ExperimentRow {
    pub model: String,
    pub eta_nominal: f64,
    pub eta_realized: f64,
    pub seed: u64,
    pub n_train_majority: usize,
    pub n_train_minority: usize,
    pub skipped: bool,
    pub metrics: Option<MetricBundle<f64>>,
    pub confusion: Option<ConfusionMatrix>,
}

// Disjoint RNG seed streams for train/test generation per experiment seed.
fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(tag)
        .wrapping_add(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn test_set(
    model: &GaussianModel,
    config: &ExperimentConfig,
    seed: u64,
    eta: f64,
) -> Result<crate::simulate::Dataset> {
    match config.test_design {
        TestDesign::Balanced => {
            generate_dataset(model, config.n_test_per_class, 1.0, derive_seed(seed, 0))
        }
        TestDesign::MatchedImbalance => {
            generate_dataset(model, config.n_test_per_class, eta, derive_seed(seed, 1000 + eta.to_bits() % 997))
        }
    }
}

/// Run the full (model, eta, seed) grid. Rows come out in canonical
/// (model, eta, seed) order; infeasible cells are emitted flagged as
/// skipped, never dropped.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let generator = make_gaussian_model(config.p, config.delta, &CovarianceProfile::Isotropic, 1.0)?;

    let mut rows = Vec::new();
    for spec in &config.models {
        for (eta_idx, &eta) in config.eta_grid.iter().enumerate() {
            for &seed in &config.seeds {
                let train = generate_dataset(
                    &generator,
                    config.n_majority_train,
                    eta,
                    derive_seed(seed, 1 + eta_idx as u64),
                )?;
                let n_min = train.provenance.n_minority;
                let n_maj = train.provenance.n_majority;
                let eta_realized = n_maj as f64 / n_min as f64;
                let mut row = ExperimentRow {
                    model: spec.name().to_string(),
                    eta_nominal: eta,
                    eta_realized,
                    seed,
                    n_train_majority: n_maj,
                    n_train_minority: n_min,
                    skipped: false,
                    metrics: None,
                    confusion: None,
                };
                if n_min < spec.min_samples_per_class() {
                    row.skipped = true;
                    rows.push(row);
                    continue;
                }
                let fitted = fit(spec, &train)?;
                let test = test_set(&generator, config, seed, eta)?;
                let scores = fitted.predict_scores(&test.features)?;
                let predicted = fitted.predict(&test.features)?;
                let (bundle, cm) = evaluate(&scores, &predicted, &test.labels)?;
                row.metrics = Some(bundle);
                row.confusion = Some(cm);
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Exact results CSV header.
pub const RESULTS_HEADER: &str = "model,eta_nominal,eta_realized,seed,n_train_majority,n_train_minority,skipped,recall_min,precision_min,f1_min,pr_auc_min,cohen_kappa,balanced_accuracy,tn,fp,fn,tp";

/// Write experiment rows in the documented schema. Skipped rows leave the
/// metric and confusion fields empty.
pub fn write_results_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{RESULTS_HEADER}")?;
    for row in rows {
        let mut fields = vec![
            row.model.clone(),
            sig9(row.eta_nominal),
            sig9(row.eta_realized),
            row.seed.to_string(),
            row.n_train_majority.to_string(),
            row.n_train_minority.to_string(),
            if row.skipped { "1".into() } else { "0".into() },
        ];
        match (&row.metrics, &row.confusion) {
            (Some(m), Some(cm)) => {
                fields.push(sig9(m.recall_minority));
                fields.push(sig9(m.precision_minority));
                fields.push(sig9(m.f1_minority));
                fields.push(m.pr_auc_minority.map(sig9).unwrap_or_default());
                fields.push(sig9(m.cohen_kappa));
                fields.push(sig9(m.balanced_accuracy));
                fields.push(cm.tn.to_string());
                fields.push(cm.fp.to_string());
                fields.push(cm.fn_.to_string());
                fields.push(cm.tp.to_string());
            }
            _ => fields.extend(std::iter::repeat_with(String::new).take(10)),
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// One aggregated curve point: metric vs eta for a model, with the
/// min/max band over seeds.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub model: String,
    pub eta: f64,
    pub metric: &'static str,
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

const CURVE_METRICS: [&str; 6] = [
    "recall_min",
    "precision_min",
    "f1_min",
    "pr_auc_min",
    "cohen_kappa",
    "balanced_accuracy",
];

fn metric_value(m: &MetricBundle<f64>, name: &str) -> Option<f64> {
    match name {
        "recall_min" => Some(m.recall_minority),
        "precision_min" => Some(m.precision_minority),
        "f1_min" => Some(m.f1_minority),
        "pr_auc_min" => m.pr_auc_minority,
        "cohen_kappa" => Some(m.cohen_kappa),
        "balanced_accuracy" => Some(m.balanced_accuracy),
        _ => None,
    }
}

/// Aggregate rows over seeds into per-(model, eta, metric) mean and
/// min/max band. Skipped rows are excluded; cells where every seed was
/// skipped are omitted.
pub fn degradation_curves(rows: &[ExperimentRow]) -> Result<Vec<CurvePoint>> {
    if rows.is_empty() {
        return Err(Error::input("degradation_curves: no rows"));
    }
    // Preserve first-seen (model, eta) order, which is canonical already.
    let mut keys: Vec<(String, f64)> = Vec::new();
    for row in rows {
        if !keys.iter().any(|(m, e)| *m == row.model && *e == row.eta_nominal) {
            keys.push((row.model.clone(), row.eta_nominal));
        }
    }
    let mut curves = Vec::new();
    for (model, eta) in keys {
        for metric in CURVE_METRICS {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.model == model && r.eta_nominal == eta && !r.skipped)
                .filter_map(|r| r.metrics.as_ref().and_then(|m| metric_value(m, metric)))
                .collect();
            if values.is_empty() {
                continue;
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            curves.push(CurvePoint { model: model.clone(), eta, metric, mean, lo, hi });
        }
    }
    Ok(curves)
}

/// Summary CSV: `model,eta,metric,mean,lo,hi`.
pub fn write_summary_csv(curves: &[CurvePoint], path: &Path) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "model,eta,metric,mean,lo,hi")?;
    for c in curves {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.model,
            sig9(c.eta),
            c.metric,
            sig9(c.mean),
            sig9(c.lo),
            sig9(c.hi)
        )?;
    }
    out.flush()?;
    Ok(())
}
