//! Implementations of the CLI subcommands. Each returns the process exit
//! code on success-path completion; hard errors bubble up as `Error`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use imbalance_core::classifiers::{
    degradation_curves, estimate_triplet, run_experiment, write_results_csv, write_summary_csv,
};
use imbalance_core::csvfmt::sig9;
use imbalance_core::landscape::{
    balanced_risk, bayes_risk, class_errors, classify_regimes, deterioration, eta_max,
    logspace_eta, RegimeLabel, RiskTarget, TripletPoint,
};
use imbalance_core::metrics::{theoretical_metrics, theoretical_pr_curve};
use imbalance_core::simulate::{mc_class_errors, read_dataset_csv};
use imbalance_core::{Error, Result};

use crate::config::load_experiment_config;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;

const PR_THRESHOLDS: usize = 2001;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

pub fn cmd_landscape(
    kappa: f64,
    delta: f64,
    eta_min: f64,
    eta_max_flag: f64,
    points: usize,
    target: RiskTarget,
    out: &Path,
) -> Result<i32> {
    let grid: Vec<f64> = logspace_eta(eta_min, eta_max_flag, points)?;
    let mut csv = String::from("eta,e_minority,e_majority,bayes_risk,balanced_risk,deterioration\n");
    for &eta in &grid {
        let point = TripletPoint::new(eta, kappa, delta)?;
        let errors = class_errors(&point)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            sig9(eta),
            sig9(errors.e_minority.value()),
            sig9(errors.e_majority.value()),
            sig9(bayes_risk(&point)?.value()),
            sig9(balanced_risk(&point)?.value()),
            sig9(deterioration(&point, target)?),
        );
    }
    write_file(out, &csv)?;
    Ok(EXIT_SUCCESS)
}

pub fn cmd_regimes(
    kappa: f64,
    delta: f64,
    eta_grid: &[f64],
    target: RiskTarget,
    tau1: f64,
    tau2: f64,
    out: &Path,
) -> Result<i32> {
    let report = classify_regimes(kappa, delta, eta_grid, target, tau1, tau2)?;
    let mut csv = String::from("eta,slope,normalized_slope,regime,eta_max\n");
    for point in &report.grid {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            sig9(point.eta),
            sig9(point.slope),
            sig9(point.normalized_slope),
            point.label.as_str(),
            sig9(report.eta_max),
        );
    }
    write_file(out, &csv)?;
    Ok(EXIT_SUCCESS)
}

pub fn cmd_metrics(
    kappa: f64,
    delta: f64,
    eta_grid: &[f64],
    pr_curve: bool,
    out: &Path,
) -> Result<i32> {
    let mut csv = String::from(
        "eta,recall_min,precision_min,f1_min,balanced_accuracy,balanced_error_rate,cohen_kappa,pr_auc_min\n",
    );
    let mut pr_csv = String::from("eta,recall,precision\n");
    for &eta in eta_grid {
        let point = TripletPoint::new(eta, kappa, delta)?;
        let bundle = theoretical_metrics(&point)?;
        let curve = theoretical_pr_curve(&point, PR_THRESHOLDS)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            sig9(eta),
            sig9(bundle.recall_minority),
            sig9(bundle.precision_minority),
            sig9(bundle.f1_minority),
            sig9(bundle.balanced_accuracy),
            sig9(bundle.balanced_error_rate),
            sig9(bundle.cohen_kappa),
            sig9(curve.auc),
        );
        if pr_curve {
            for &(recall, precision) in &curve.points {
                let _ = writeln!(pr_csv, "{},{},{}", sig9(eta), sig9(recall), sig9(precision));
            }
        }
    }
    write_file(out, &csv)?;
    if pr_curve {
        write_file(&derived_path(out, "_pr"), &pr_csv)?;
    }
    Ok(EXIT_SUCCESS)
}

/// `results.csv` -> `results_pr.csv` (suffix inserted before the extension).
pub fn derived_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}{suffix}.{ext}"))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_validate(
    eta_grid: &[f64],
    kappa_grid: &[f64],
    delta_grid: &[f64],
    samples: usize,
    seed: u64,
    pass_floor: f64,
    out: &Path,
) -> Result<i32> {
    if samples < 1_000 {
        return Err(Error::input("validate: --samples must be >= 1000"));
    }
    if !(0.0..=1.0).contains(&pass_floor) {
        return Err(Error::input("validate: --pass-floor must lie in [0, 1]"));
    }
    let mut csv = String::from(
        "eta,kappa,delta,e_minority_closed,e_majority_closed,e_minority_mc,e_majority_mc,half_width_minority,half_width_majority,pass\n",
    );
    let mut passed = 0usize;
    let mut total = 0usize;
    let mut cell = 0u64;
    for &kappa in kappa_grid {
        for &delta in delta_grid {
            for &eta in eta_grid {
                let point = TripletPoint::new(eta, kappa, delta)?;
                let closed = class_errors(&point)?;
                // One independent seed per lattice cell.
                let (mc_min, mc_maj) = mc_class_errors(samples, &point, seed.wrapping_add(cell))?;
                cell += 1;
                let ok = mc_min.brackets(closed.e_minority.value())
                    && mc_maj.brackets(closed.e_majority.value());
                passed += ok as usize;
                total += 1;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{},{}",
                    sig9(eta),
                    sig9(kappa),
                    sig9(delta),
                    sig9(closed.e_minority.value()),
                    sig9(closed.e_majority.value()),
                    sig9(mc_min.estimate.value()),
                    sig9(mc_maj.estimate.value()),
                    sig9(mc_min.half_width_95),
                    sig9(mc_maj.half_width_95),
                    ok as u8,
                );
            }
        }
    }
    write_file(out, &csv)?;
    let rate = passed as f64 / total as f64;
    println!("validate: {passed}/{total} cells passed (rate {})", sig9(rate));
    if rate < pass_floor {
        eprintln!("validate: pass rate {} below floor {}", sig9(rate), sig9(pass_floor));
        return Ok(EXIT_VALIDATION);
    }
    Ok(EXIT_SUCCESS)
}

pub fn cmd_empirical(config_path: &Path, out: Option<&Path>) -> Result<i32> {
    let config = load_experiment_config(config_path)?;
    let results_path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&config.output_path));
    let rows = run_experiment(&config)?;
    write_results_csv(&rows, &results_path)?;
    let curves = degradation_curves(&rows)?;
    write_summary_csv(&curves, &derived_path(&results_path, "_summary"))?;
    println!(
        "empirical: {} rows -> {} (+ summary)",
        rows.len(),
        results_path.display()
    );
    Ok(EXIT_SUCCESS)
}

pub fn cmd_audit(data: &Path, out: Option<&Path>) -> Result<i32> {
    let dataset = read_dataset_csv(data)?;
    let estimate = estimate_triplet(&dataset)?;
    let (eta_hat, kappa_hat, delta_hat) =
        (estimate.eta_hat, estimate.kappa_hat, estimate.delta_hat);

    let (threshold, regime) = if delta_hat < 1e-8 {
        // Degenerate separation: the threshold collapses onto eta = 1 and
        // any imbalance at all is catastrophic.
        let label = if eta_hat > 1.0 { RegimeLabel::Catastrophic } else { RegimeLabel::Normal };
        (1.0, label)
    } else {
        let threshold = eta_max(kappa_hat, delta_hat)?;
        let mut grid: Vec<f64> = logspace_eta(1.0, eta_hat.max(10.0), 101)?;
        grid.push(eta_hat);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let report =
            classify_regimes(kappa_hat, delta_hat, &grid, RiskTarget::default(), 0.1, 0.5)?;
        let label = report
            .grid
            .iter()
            .min_by(|a, b| {
                let da = (a.eta - eta_hat).abs();
                let db = (b.eta - eta_hat).abs();
                da.partial_cmp(&db).unwrap()
            })
            .map(|p| p.label)
            .unwrap();
        (threshold, label)
    };
    let headroom = eta_hat / threshold;

    println!("eta_hat = {}", sig9(eta_hat));
    println!("kappa_hat = {}", sig9(kappa_hat));
    println!("delta_hat = {}", sig9(delta_hat));
    println!("eta_max = {}", sig9(threshold));
    println!("headroom = {}", sig9(headroom));
    println!("regime = {}", regime.as_str());

    if let Some(out) = out {
        let csv = format!(
            "eta_hat,kappa_hat,delta_hat,eta_max,headroom,regime\n{},{},{},{},{},{}\n",
            sig9(eta_hat),
            sig9(kappa_hat),
            sig9(delta_hat),
            sig9(threshold),
            sig9(headroom),
            regime.as_str(),
        );
        write_file(out, &csv)?;
    }
    Ok(EXIT_SUCCESS)
}
