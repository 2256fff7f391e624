//! Monte Carlo oracles: the simulation layer must reproduce the closed
//! forms within standard statistical error bounds.

use imbalance_core::landscape::{class_errors, TripletPoint};
use imbalance_core::simulate::{
    generate_dataset, make_gaussian_model, mc_class_errors, population_bayes_classify,
    sample_scores, Class, CovarianceProfile,
};

const N: usize = 1_000_000;

#[test]
fn score_sample_moments() {
    let majority = sample_scores(N, Class::Majority, 2.0, 7).unwrap();
    let mean = majority.iter().sum::<f64>() / N as f64;
    // Score mean is d^2/2 = 2 with sd d = 2; CLT 3-sigma bound.
    assert!((mean - 2.0).abs() < 3.0 * 2.0 / (N as f64).sqrt(), "mean {mean}");

    let minority = sample_scores(N, Class::Minority, 2.0, 7).unwrap();
    let min_mean = minority.iter().sum::<f64>() / N as f64;
    let var = minority.iter().map(|t| (t - min_mean).powi(2)).sum::<f64>() / (N - 1) as f64;
    assert!((var - 4.0).abs() / 4.0 < 0.05, "variance {var}");
}

#[test]
fn mc_errors_bracket_closed_forms() {
    let balanced = TripletPoint::new(1.0, 1.0, 2.0).unwrap();
    let (e_min, e_maj) = mc_class_errors(N, &balanced, 11).unwrap();
    let truth = class_errors(&balanced).unwrap();
    assert!((e_min.estimate.value() - truth.e_minority.value()).abs() < 0.0011);
    assert!((e_maj.estimate.value() - truth.e_majority.value()).abs() < 0.0011);

    let critical = TripletPoint::new(std::f64::consts::E.powi(2), 1.0, 2.0).unwrap();
    let (e_min, e_maj) = mc_class_errors(N, &critical, 11).unwrap();
    assert!((e_min.estimate.value() - 0.5).abs() < 0.0015, "{}", e_min.estimate.value());
    assert!((e_maj.estimate.value() - 0.022750131948).abs() < 0.0011);
}

#[test]
fn mc_errors_bracket_across_triplet_lattice() {
    // A coarser sweep: every point must land inside the 95% interval
    // inflated to 3 sigma (99.7%), so a single miss flags a real bug
    // rather than noise.
    for &eta in &[1.0, 2.0, 5.0, 20.0] {
        for &kappa in &[0.5, 1.0, 2.0] {
            for &delta in &[1.0, 2.0, 3.0] {
                let point = TripletPoint::new(eta, kappa, delta).unwrap();
                let truth = class_errors(&point).unwrap();
                let (e_min, e_maj) = mc_class_errors(200_000, &point, 42).unwrap();
                let slack = 3.0 / 1.96;
                assert!(
                    (e_min.estimate.value() - truth.e_minority.value()).abs()
                        <= slack * e_min.half_width_95.max(1e-5),
                    "minority miss at ({eta}, {kappa}, {delta})"
                );
                assert!(
                    (e_maj.estimate.value() - truth.e_majority.value()).abs()
                        <= slack * e_maj.half_width_95.max(1e-5),
                    "majority miss at ({eta}, {kappa}, {delta})"
                );
            }
        }
    }
}

#[test]
fn generated_dataset_mahalanobis_recomputes_exactly() {
    let model = make_gaussian_model(50, 2.0, &CovarianceProfile::Isotropic, 10.0).unwrap();
    assert!((model.mahalanobis() - 2.0).abs() < 1e-9);

    // Anisotropic axis-0 variance: the offset must rescale to hold delta.
    let mut diag = vec![1.0; 10];
    diag[0] = 4.0;
    let aniso = make_gaussian_model(10, 2.0, &CovarianceProfile::Diagonal(diag), 10.0).unwrap();
    assert!((aniso.mahalanobis() - 2.0).abs() < 1e-9);
    let offset = aniso.mu_majority[0] - aniso.mu_minority[0];
    assert!((offset - 4.0).abs() < 1e-9, "offset {offset} should be delta * sigma_0 = 4");
}

#[test]
fn minority_count_rounds_and_floors() {
    let model = make_gaussian_model(5, 2.0, &CovarianceProfile::Isotropic, 100.0).unwrap();
    let data = generate_dataset(&model, 200, 100.0, 1).unwrap();
    assert_eq!(data.len(), 202);
    assert_eq!(data.count(Class::Minority), 2);

    let tiny = generate_dataset(&model, 3, 100.0, 1).unwrap();
    assert_eq!(tiny.count(Class::Minority), 1, "minority count floors at 1");
}

#[test]
fn population_rule_hits_bayes_error_on_balanced_data() {
    let model = make_gaussian_model(10, 2.0, &CovarianceProfile::Isotropic, 1.0).unwrap();
    let data = generate_dataset(&model, 50_000, 1.0, 9).unwrap();
    let predicted = population_bayes_classify(&data.features, &model, 1.0).unwrap();
    let errors = predicted
        .iter()
        .zip(&data.labels)
        .filter(|(p, t)| p != t)
        .count();
    let rate = errors as f64 / data.len() as f64;
    let bayes = 0.158655253931;
    let sigma = (bayes * (1.0 - bayes) / data.len() as f64).sqrt();
    assert!((rate - bayes).abs() < 3.0 * sigma, "rate {rate}");
}

#[test]
fn streams_are_deterministic_and_disjoint() {
    let a = sample_scores(100, Class::Minority, 2.0, 5).unwrap();
    let b = sample_scores(100, Class::Minority, 2.0, 5).unwrap();
    assert_eq!(a, b, "same seed must reproduce exactly");
    let c = sample_scores(100, Class::Majority, 2.0, 5).unwrap();
    assert!(a.iter().zip(&c).all(|(x, y)| x != y), "class streams must differ");
    let d = sample_scores(100, Class::Minority, 2.0, 6).unwrap();
    assert_ne!(a, d, "different seeds must differ");
}
