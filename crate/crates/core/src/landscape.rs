//! Closed-form Bayes landscape over the (eta, kappa, delta) triplet.
//!
//! Conventions used throughout the crate:
//! * `eta >= 1` is the majority/minority odds ratio; inputs below 1 are
//!   rejected rather than flipped.
//! * "minority" always names the class whose error grows with eta (the
//!   decision boundary shifts into its territory), independent of any 0/1
//!   subscript convention.
//!
//! With the effective margin `d = delta * sqrt(kappa)`, `m = d/2` and
//! `t = ln(eta)/d`, the class-conditional Bayes errors are
//! `e_minority = Phi(-m + t)` and `e_majority = Phi(-m - t)`.

use crate::error::{Error, Result};
use crate::real::{real, Real};
use crate::specfun::{normal_cdf, normal_pdf, Probability};

/// A point of the imbalance landscape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletPoint<R: Real> {
    eta: R,
    kappa: R,
    delta: R,
}

impl<R: Real> TripletPoint<R> {
    /// Validate and build a triplet. Requires finite eta >= 1, kappa > 0,
    /// delta > 0.
    pub fn new(eta: R, kappa: R, delta: R) -> Result<Self> {
        if !eta.is_finite() || eta < R::one() {
            return Err(Error::Domain(format!(
                "eta must be finite and >= 1 (majority/minority convention), got {eta}"
            )));
        }
        if !kappa.is_finite() || kappa <= R::zero() {
            return Err(Error::Domain(format!("kappa must be finite and > 0, got {kappa}")));
        }
        if !delta.is_finite() || delta <= R::zero() {
            return Err(Error::Domain(format!("delta must be finite and > 0, got {delta}")));
        }
        Ok(TripletPoint { eta, kappa, delta })
    }

    #[inline]
    pub fn eta(&self) -> R {
        self.eta
    }

    #[inline]
    pub fn kappa(&self) -> R {
        self.kappa
    }

    #[inline]
    pub fn delta(&self) -> R {
        self.delta
    }

    /// Usable separation delta * sqrt(kappa).
    #[inline]
    pub fn effective_margin(&self) -> R {
        self.delta * self.kappa.sqrt()
    }

    /// Same (kappa, delta) at the balanced reference eta = 1.
    pub fn balanced(&self) -> Self {
        TripletPoint { eta: R::one(), ..*self }
    }

    /// Class priors implied by eta.
    pub fn priors(&self) -> Priors<R> {
        let denom = R::one() + self.eta;
        Priors {
            pi_majority: Probability::new(self.eta / denom).expect("prior in [0,1]"),
            pi_minority: Probability::new((R::one() / denom).min(R::one())).expect("prior in [0,1]"),
        }
    }
}

/// Class priors (majority + minority = 1).
#[derive(Debug, Clone, Copy)]
pub struct Priors<R: Real> {
    pub pi_majority: Probability<R>,
    pub pi_minority: Probability<R>,
}

/// Class-conditional Bayes errors at a triplet point.
#[derive(Debug, Clone, Copy)]
pub struct ErrorPair<R: Real> {
    pub e_minority: Probability<R>,
    pub e_majority: Probability<R>,
}

/// Which risk curve deterioration and slopes are measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiskTarget {
    /// Prior-weighted Bayes risk (Eq-6 style mixture).
    BayesRisk,
    /// Unweighted mean of the two class errors. This is the default: it is
    /// the target for which deterioration is provably non-negative.
    #[default]
    BalancedRisk,
    /// The minority error itself.
    MinorityError,
}

impl RiskTarget {
    pub fn evaluate<R: Real>(self, point: &TripletPoint<R>) -> Result<R> {
        Ok(match self {
            RiskTarget::BayesRisk => bayes_risk(point)?.value(),
            RiskTarget::BalancedRisk => balanced_risk(point)?.value(),
            RiskTarget::MinorityError => class_errors(point)?.e_minority.value(),
        })
    }
}

/// Severity label of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    Normal,
    Mild,
    Extreme,
    Catastrophic,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::Normal => "normal",
            RegimeLabel::Mild => "mild",
            RegimeLabel::Extreme => "extreme",
            RegimeLabel::Catastrophic => "catastrophic",
        }
    }
}

/// One labeled grid point of a regime sweep.
#[derive(Debug, Clone, Copy)]
pub struct RegimePoint<R: Real> {
    pub eta: R,
    pub slope: R,
    pub normalized_slope: R,
    pub label: RegimeLabel,
}

/// Full regime classification of a target curve over an eta grid.
#[derive(Debug, Clone)]
pub struct RegimeReport<R: Real> {
    pub grid: Vec<RegimePoint<R>>,
    pub s_max: R,
    pub eta_max: R,
    pub tau1_fraction: R,
    pub tau2_fraction: R,
}

/// Class-conditional Bayes errors e_minority = Phi(-m + t),
/// e_majority = Phi(-m - t).
pub fn class_errors<R: Real>(point: &TripletPoint<R>) -> Result<ErrorPair<R>> {
    let d = point.effective_margin();
    let m = d / real(2.0);
    let t = point.eta().ln() / d;
    Ok(ErrorPair {
        e_minority: normal_cdf(-m + t)?,
        e_majority: normal_cdf(-m - t)?,
    })
}

/// Prior-weighted Bayes risk pi_min * e_min + pi_maj * e_maj.
pub fn bayes_risk<R: Real>(point: &TripletPoint<R>) -> Result<Probability<R>> {
    let errors = class_errors(point)?;
    let priors = point.priors();
    Probability::new(
        priors.pi_minority.value() * errors.e_minority.value()
            + priors.pi_majority.value() * errors.e_majority.value(),
    )
}

/// Balanced error rate (e_min + e_maj) / 2.
pub fn balanced_risk<R: Real>(point: &TripletPoint<R>) -> Result<Probability<R>> {
    let errors = class_errors(point)?;
    Probability::new((errors.e_minority.value() + errors.e_majority.value()) / real(2.0))
}

/// Deviation of the target curve from its balanced (eta = 1) reference.
pub fn deterioration<R: Real>(point: &TripletPoint<R>, target: RiskTarget) -> Result<R> {
    Ok(target.evaluate(point)? - target.evaluate(&point.balanced())?)
}

/// Exact derivatives of the class errors with respect to ln(eta):
/// `(phi(-m+t)/d, -phi(-m-t)/d)`.
pub fn analytic_error_slopes<R: Real>(point: &TripletPoint<R>) -> Result<(R, R)> {
    let d = point.effective_margin();
    let m = d / real(2.0);
    let t = point.eta().ln() / d;
    Ok((normal_pdf(-m + t)? / d, -normal_pdf(-m - t)? / d))
}

/// Numerical slope of a curve sampled at strictly increasing ln(eta).
///
/// Central differences at interior points; three-point one-sided stencils at
/// the endpoints, so the result is exact for affine and quadratic inputs.
pub fn numeric_slope<R: Real>(curve: &[(R, R)]) -> Result<Vec<(R, R)>> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::Input(format!("numeric_slope needs >= 3 points, got {n}")));
    }
    for w in curve.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::input("numeric_slope grid must be strictly increasing"));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let slope = if i == 0 {
            one_sided(curve[0], curve[1], curve[2])
        } else if i == n - 1 {
            one_sided(curve[n - 1], curve[n - 2], curve[n - 3])
        } else {
            let (x0, y0) = curve[i - 1];
            let (x2, y2) = curve[i + 1];
            let (x1, y1) = curve[i];
            // Unequal-spacing central difference (exact for quadratics).
            let h1 = x1 - x0;
            let h2 = x2 - x1;
            (y2 * h1 * h1 - y0 * h2 * h2 + y1 * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h1 + h2))
        };
        out.push((curve[i].0, slope));
    }
    Ok(out)
}

/// Three-point one-sided derivative at `a`, using neighbors `b`, `c`.
fn one_sided<R: Real>(a: (R, R), b: (R, R), c: (R, R)) -> R {
    let (x0, y0) = a;
    let (x1, y1) = b;
    let (x2, y2) = c;
    let h1 = x1 - x0;
    let h2 = x2 - x0;
    // Lagrange derivative at x0.
    y0 * (h1 + h2) / (h1 * h2) * (-R::one()) + y1 * h2 / (h1 * (h2 - h1))
        - y2 * h1 / (h2 * (h2 - h1))
}

/// Catastrophic imbalance threshold exp(delta^2 * kappa / 2).
pub fn eta_max<R: Real>(kappa: R, delta: R) -> Result<R> {
    if !kappa.is_finite() || kappa <= R::zero() || !delta.is_finite() || delta <= R::zero() {
        return Err(Error::domain("eta_max requires kappa > 0 and delta > 0"));
    }
    Ok((delta * delta * kappa / real(2.0)).exp())
}

/// Classify an eta grid into Normal / Mild / Extreme / Catastrophic by
/// normalized slope of the target curve, with Catastrophic overriding
/// wherever eta exceeds the exact threshold.
pub fn classify_regimes<R: Real>(
    kappa: R,
    delta: R,
    eta_grid: &[R],
    target: RiskTarget,
    tau1_fraction: R,
    tau2_fraction: R,
) -> Result<RegimeReport<R>> {
    if eta_grid.len() < 3 {
        return Err(Error::input("regime grid needs >= 3 points"));
    }
    if !(tau1_fraction > R::zero() && tau1_fraction < tau2_fraction && tau2_fraction < R::one()) {
        return Err(Error::Input(format!(
            "tau fractions must satisfy 0 < tau1 < tau2 < 1, got ({tau1_fraction}, {tau2_fraction})"
        )));
    }
    let mut curve = Vec::with_capacity(eta_grid.len());
    for &eta in eta_grid {
        let point = TripletPoint::new(eta, kappa, delta)?;
        curve.push((eta.ln(), target.evaluate(&point)?));
    }
    let slopes = numeric_slope(&curve)?;
    let s_max = slopes
        .iter()
        .map(|&(_, s)| s.abs())
        .fold(R::zero(), |a, b| a.max(b));
    let threshold = eta_max(kappa, delta)?;
    let grid = eta_grid
        .iter()
        .zip(&slopes)
        .map(|(&eta, &(_, slope))| {
            let normalized = if s_max > R::zero() { slope.abs() / s_max } else { R::zero() };
            let label = if eta > threshold {
                RegimeLabel::Catastrophic
            } else if normalized <= tau1_fraction {
                RegimeLabel::Normal
            } else if normalized <= tau2_fraction {
                RegimeLabel::Mild
            } else {
                RegimeLabel::Extreme
            };
            RegimePoint { eta, slope, normalized_slope: normalized, label }
        })
        .collect();
    Ok(RegimeReport {
        grid,
        s_max,
        eta_max: threshold,
        tau1_fraction,
        tau2_fraction,
    })
}

/// Log-spaced eta grid on [eta_min, eta_max] inclusive.
pub fn logspace_eta<R: Real>(eta_min: R, eta_max: R, points: usize) -> Result<Vec<R>> {
    if points < 3 {
        return Err(Error::input("logspace grid needs >= 3 points"));
    }
    if !(eta_min >= R::one() && eta_max > eta_min) {
        return Err(Error::domain("logspace requires 1 <= eta_min < eta_max"));
    }
    let lo = eta_min.ln();
    let hi = eta_max.ln();
    let step = (hi - lo) / real(points as f64 - 1.0);
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                eta_max
            } else {
                (lo + step * real(i as f64)).exp()
            }
        })
        .collect())
}
