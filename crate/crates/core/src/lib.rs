//! Closed-form analysis of binary classification under class imbalance.
//!
//! The library is organized around the triplet (eta, kappa, delta): the
//! majority/minority odds ratio, the sample-to-dimension ratio, and the
//! Mahalanobis separability between class means. From these three scales it
//! computes exact class-conditional Bayes errors, risk and deterioration
//! surfaces, a severity taxonomy with its catastrophic threshold, and
//! theoretical metric surfaces (recall, precision, F1, PR-AUC, Cohen's
//! kappa). A Monte Carlo layer validates the closed forms by simulation, and
//! the `classifiers` module runs controlled-imbalance experiments with
//! from-scratch models (logistic regression, LDA, QDA, Gaussian NB, kNN).
//!
//! The analytic layers (`specfun`, `landscape`, `metrics`) are generic over
//! the scalar type through the [`Real`] trait; `f64` aliases are exported at
//! the crate root. The simulation and experiment layers are `f64`-only.

pub mod classifiers;
pub mod csvfmt;
pub mod error;
pub mod landscape;
pub mod metrics;
pub mod real;
pub mod simulate;
pub mod specfun;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` concrete aliases for the generic analytic types.
pub type Probability64 = specfun::Probability<f64>;
pub type TripletPoint64 = landscape::TripletPoint<f64>;
pub type Priors64 = landscape::Priors<f64>;
pub type ErrorPair64 = landscape::ErrorPair<f64>;
pub type RegimeReport64 = landscape::RegimeReport<f64>;
pub type ConfusionRates64 = metrics::ConfusionRates<f64>;
pub type MetricBundle64 = metrics::MetricBundle<f64>;
pub type PrCurve64 = metrics::PrCurve<f64>;
