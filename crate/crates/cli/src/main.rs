//! `imbalance` — closed-form and empirical analysis of binary
//! classification under class imbalance over the (eta, kappa, delta)
//! triplet.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.

mod commands;
mod config;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use imbalance_core::landscape::RiskTarget;
use imbalance_core::Error;

use crate::grid::parse_eta_grid;

#[derive(Parser)]
#[command(
    name = "imbalance",
    version,
    about = "Bayes landscape of class imbalance: error surfaces, regimes, metrics, Monte Carlo validation, and controlled experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    /// Prior-weighted Bayes risk.
    BayesRisk,
    /// Unweighted mean of the class-conditional errors (default).
    BalancedRisk,
    /// Minority-conditional error alone.
    MinorityError,
}

impl From<TargetArg> for RiskTarget {
    fn from(value: TargetArg) -> Self {
        match value {
            TargetArg::BayesRisk => RiskTarget::BayesRisk,
            TargetArg::BalancedRisk => RiskTarget::BalancedRisk,
            TargetArg::MinorityError => RiskTarget::MinorityError,
        }
    }
}

#[derive(Args)]
struct LandscapeArgs {
    /// Sample-to-dimension ratio kappa = n/p.
    #[arg(long)]
    kappa: f64,
    /// Mahalanobis separability between the class means.
    #[arg(long)]
    delta: f64,
    /// Smallest eta of the log-spaced sweep (>= 1).
    #[arg(long, default_value_t = 1.0)]
    eta_min: f64,
    /// Largest eta of the sweep.
    #[arg(long, default_value_t = 100.0)]
    eta_max: f64,
    /// Number of grid points (>= 3).
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Deterioration target curve.
    #[arg(long, value_enum, default_value_t = TargetArg::BalancedRisk)]
    target: TargetArg,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RegimesArgs {
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    delta: f64,
    /// Eta grid: comma list (`1,2,5`) or `logspace(min,max,points)`.
    #[arg(long, default_value = "logspace(1,100,50)")]
    eta_grid: String,
    #[arg(long, value_enum, default_value_t = TargetArg::BalancedRisk)]
    target: TargetArg,
    /// Normal/Mild boundary as a fraction of the peak slope.
    #[arg(long, default_value_t = 0.1)]
    tau1: f64,
    /// Mild/Extreme boundary as a fraction of the peak slope.
    #[arg(long, default_value_t = 0.5)]
    tau2: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    kappa: f64,
    #[arg(long)]
    delta: f64,
    /// Eta grid: comma list or `logspace(min,max,points)`.
    #[arg(long, default_value = "logspace(1,100,50)")]
    eta_grid: String,
    /// Also emit the per-eta precision-recall curves to `<out>_pr.csv`.
    #[arg(long)]
    pr_curve: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Eta lattice axis.
    #[arg(long, default_value = "logspace(1,100,5)")]
    eta_grid: String,
    /// Kappa lattice axis, comma-separated.
    #[arg(long, default_value = "0.25,0.5,1,2,4")]
    kappa_grid: String,
    /// Delta lattice axis, comma-separated.
    #[arg(long, default_value = "0.5,1,2,3,4")]
    delta_grid: String,
    /// Monte Carlo samples per class per cell (>= 1000).
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Minimum fraction of cells whose 95% interval must bracket the
    /// closed form; below this the command exits with code 2.
    #[arg(long, default_value_t = 0.9)]
    pass_floor: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EmpiricalArgs {
    /// Flat key-value experiment configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Results CSV path; overrides `output_path` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Dataset CSV in the export format (feature columns then `label`).
    #[arg(long)]
    data: PathBuf,
    /// Optional one-row CSV report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form error and risk surfaces along a log-spaced eta sweep.
    Landscape(LandscapeArgs),
    /// Severity taxonomy of the deterioration slope with the exact
    /// catastrophic threshold.
    Regimes(RegimesArgs),
    /// Theoretical metric surfaces (recall, precision, F1, BA, kappa,
    /// PR-AUC) along an eta grid.
    Metrics(MetricsArgs),
    /// Monte Carlo verification of the closed forms over a triplet lattice.
    Validate(ValidateArgs),
    /// Controlled-imbalance experiment with from-scratch classifiers.
    Empirical(EmpiricalArgs),
    /// Estimate (eta, kappa, delta) from a dataset and place it on the map.
    Audit(AuditArgs),
}

fn dispatch(cli: Cli) -> imbalance_core::Result<i32> {
    match cli.command {
        Command::Landscape(a) => commands::cmd_landscape(
            a.kappa,
            a.delta,
            a.eta_min,
            a.eta_max,
            a.points,
            a.target.into(),
            &a.out,
        ),
        Command::Regimes(a) => {
            let grid = parse_eta_grid(&a.eta_grid)?;
            commands::cmd_regimes(a.kappa, a.delta, &grid, a.target.into(), a.tau1, a.tau2, &a.out)
        }
        Command::Metrics(a) => {
            let grid = parse_eta_grid(&a.eta_grid)?;
            commands::cmd_metrics(a.kappa, a.delta, &grid, a.pr_curve, &a.out)
        }
        Command::Validate(a) => {
            let eta_grid = parse_eta_grid(&a.eta_grid)?;
            let kappa_grid = parse_axis(&a.kappa_grid, "kappa grid")?;
            let delta_grid = parse_axis(&a.delta_grid, "delta grid")?;
            commands::cmd_validate(
                &eta_grid,
                &kappa_grid,
                &delta_grid,
                a.samples,
                a.seed,
                a.pass_floor,
                &a.out,
            )
        }
        Command::Empirical(a) => commands::cmd_empirical(&a.config, a.out.as_deref()),
        Command::Audit(a) => commands::cmd_audit(&a.data, a.out.as_deref()),
    }
}

fn parse_axis(spec: &str, what: &str) -> imbalance_core::Result<Vec<f64>> {
    let axis: Vec<f64> = spec
        .split(',')
        .map(|tok| grid::parse_num(tok.trim(), what))
        .collect::<imbalance_core::Result<_>>()?;
    if axis.is_empty() {
        return Err(Error::Input(format!("{what} is empty")));
    }
    Ok(axis)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes, not usage errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Error::Io(err)) => {
            eprintln!("I/O error: {err}");
            ExitCode::from(3)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
