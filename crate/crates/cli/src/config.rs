//! Flat key-value experiment configuration files.
//!
//! Format: one `key = value` pair per line; `#` starts a comment; lists are
//! comma-separated. Recognized keys: delta, p, n_majority_train,
//! n_test_per_class, eta_grid, seeds, models, knn_k, logistic_l2,
//! logistic_max_iter, logistic_tol, test_design, output_path.

use std::collections::HashMap;
use std::path::Path;

use imbalance_core::classifiers::{ClassifierSpec, ExperimentConfig, TestDesign};
use imbalance_core::{Error, Result};

use crate::grid::parse_eta_grid;

const KNOWN_KEYS: &[&str] = &[
    "delta",
    "p",
    "n_majority_train",
    "n_test_per_class",
    "eta_grid",
    "seeds",
    "models",
    "knn_k",
    "logistic_l2",
    "logistic_max_iter",
    "logistic_tol",
    "test_design",
    "output_path",
];

pub fn load_experiment_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_experiment_config(&text)
}

pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig> {
    let mut pairs: HashMap<&str, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Input(format!("config line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Input(format!("config: unknown key `{key}`")));
        }
        if pairs.insert(key, value.trim().to_string()).is_some() {
            return Err(Error::Input(format!("config: duplicate key `{key}`")));
        }
    }

    let require = |key: &str| -> Result<&String> {
        pairs
            .get(key)
            .ok_or_else(|| Error::Input(format!("config: missing required key `{key}`")))
    };

    let delta: f64 = parse_value(require("delta")?, "delta")?;
    let p: usize = parse_value(require("p")?, "p")?;
    let n_majority_train: usize = parse_value(require("n_majority_train")?, "n_majority_train")?;
    let n_test_per_class: usize = parse_value(require("n_test_per_class")?, "n_test_per_class")?;
    let eta_grid = parse_eta_grid(require("eta_grid")?)
        .map_err(|e| Error::Input(format!("config key `eta_grid`: {e}")))?;
    let seeds: Vec<u64> = require("seeds")?
        .split(',')
        .map(|tok| parse_value(tok.trim(), "seeds"))
        .collect::<Result<_>>()?;
    let output_path = require("output_path")?.clone();

    let knn_k: usize = optional(&pairs, "knn_k", 5)?;
    let logistic_l2: f64 = optional(&pairs, "logistic_l2", 1.0)?;
    let logistic_max_iter: usize = optional(&pairs, "logistic_max_iter", 100)?;
    let logistic_tol: f64 = optional(&pairs, "logistic_tol", 1e-8)?;

    let models = require("models")?
        .split(',')
        .map(|tok| match tok.trim() {
            "logistic" => Ok(ClassifierSpec::Logistic {
                l2_strength: logistic_l2,
                max_iterations: logistic_max_iter,
                tolerance: logistic_tol,
            }),
            "lda" => Ok(ClassifierSpec::Lda),
            "qda" => Ok(ClassifierSpec::Qda),
            "gnb" => Ok(ClassifierSpec::Gnb),
            "knn" => Ok(ClassifierSpec::Knn { k: knn_k }),
            other => Err(Error::Input(format!(
                "config key `models`: unknown model `{other}` (expected logistic, lda, qda, gnb, knn)"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;

    let test_design = match pairs.get("test_design").map(String::as_str) {
        None | Some("balanced") => TestDesign::Balanced,
        Some("matched_imbalance") => TestDesign::MatchedImbalance,
        Some(other) => {
            return Err(Error::Input(format!(
                "config key `test_design`: expected balanced or matched_imbalance, got `{other}`"
            )))
        }
    };

    let config = ExperimentConfig {
        delta,
        p,
        n_majority_train,
        n_test_per_class,
        eta_grid,
        seeds,
        models,
        test_design,
        output_path,
    };
    config.validate()?;
    Ok(config)
}

fn parse_value<T: std::str::FromStr>(token: &str, key: &str) -> Result<T> {
    token
        .parse::<T>()
        .map_err(|_| Error::Input(format!("config key `{key}`: cannot parse `{token}`")))
}

fn optional<T: std::str::FromStr>(
    pairs: &HashMap<&str, String>,
    key: &str,
    default: T,
) -> Result<T> {
    match pairs.get(key) {
        Some(v) => parse_value(v, key),
        None => Ok(default),
    }
}
