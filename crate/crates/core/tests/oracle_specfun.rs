//! Cross-checks of the normal special functions against an independent
//! implementation (statrs) and against high-precision reference values.

use imbalance_core::specfun::{normal_cdf, normal_pdf, normal_quantile, Probability};
use statrs::distribution::{ContinuousCDF, Normal};

#[test]
fn cdf_matches_independent_library_on_dense_grid() {
    let reference = Normal::new(0.0, 1.0).unwrap();
    let mut max_err = 0.0f64;
    let mut z = -37.0f64;
    while z <= 37.0 {
        let ours = normal_cdf(z).unwrap().value();
        let theirs = reference.cdf(z);
        max_err = max_err.max((ours - theirs).abs());
        z += 0.0137;
    }
    // The reference library's erf is itself only ~1e-11 accurate, so this
    // bound reflects the oracle's precision, not ours; the pinned
    // reference values below check us at the 1e-12 level.
    assert!(max_err < 1e-10, "max abs CDF disagreement {max_err}");
}

#[test]
fn quantile_matches_independent_library() {
    let reference = Normal::new(0.0, 1.0).unwrap();
    for i in 1..200 {
        let p = i as f64 / 200.0;
        let ours = normal_quantile(Probability::new(p).unwrap()).unwrap();
        let theirs = reference.inverse_cdf(p);
        assert!(
            (ours - theirs).abs() < 1e-9,
            "quantile mismatch at p={p}: {ours} vs {theirs}"
        );
    }
}

#[test]
fn reference_values() {
    assert!((normal_cdf(-1.0f64).unwrap().value() - 0.158655253931).abs() < 1e-12);
    assert!((normal_cdf(-2.0f64).unwrap().value() - 0.022750131948).abs() < 1e-12);
    assert!((normal_pdf(0.0f64).unwrap() - 0.398942280401).abs() < 1e-12);
    assert!((normal_pdf(1.0f64).unwrap() - 0.241970724519).abs() < 1e-12);
    let q = normal_quantile(Probability::new(0.158655253931f64).unwrap()).unwrap();
    assert!((q + 1.0).abs() < 1e-8);
    let q975 = normal_quantile(Probability::new(0.975f64).unwrap()).unwrap();
    assert!((q975 - 1.959963985).abs() < 1e-8);
}

#[test]
fn quantile_round_trips_through_cdf() {
    for i in 1..100 {
        let p = i as f64 / 100.0;
        let z = normal_quantile(Probability::new(p).unwrap()).unwrap();
        let back = normal_cdf(z).unwrap().value();
        assert!((back - p).abs() < 1e-12, "round trip broke at p={p}");
    }
}
