//! Standard normal PDF, CDF, and quantile.
//!
//! The CDF is computed through Cody's rational approximations to erf/erfc,
//! accurate to better than 1e-15 relative error in `f64`. The quantile uses
//! Acklam's rational initializer refined by two Halley steps against the CDF
//! itself, which round-trips the CDF well below 1e-10.

// The published approximation coefficients are kept verbatim at full
// printed precision.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::real::{real, Real};

/// A scalar constrained to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability<R: Real>(R);

impl<R: Real> Probability<R> {
    /// Wrap a value, rejecting anything outside [0, 1] or non-finite.
    pub fn new(value: R) -> Result<Self> {
        if !value.is_finite() || value < R::zero() || value > R::one() {
            return Err(Error::Domain(format!(
                "probability must lie in [0, 1], got {value}"
            )));
        }
        Ok(Probability(value))
    }

    #[inline]
    pub fn value(self) -> R {
        self.0
    }

    /// Complement 1 - p.
    #[inline]
    pub fn complement(self) -> Self {
        Probability(R::one() - self.0)
    }
}

// Cody's coefficients for erf on |x| <= 0.46875.
const ERF_A: [f64; 5] = [
    3.161123743870565e0,
    1.138641541510501e2,
    3.774852376853020e2,
    3.209377589138469e3,
    1.857777061846031e-1,
];
const ERF_B: [f64; 4] = [
    2.360129095234412e1,
    2.440246379344441e2,
    1.282616526077372e3,
    2.844236833439170e3,
];

// Cody's coefficients for erfc on 0.46875 < x <= 4.
const ERF_C: [f64; 9] = [
    5.641884969886700e-1,
    8.883149794388375e0,
    6.611919063714162e1,
    2.986351381974001e2,
    8.819522212417690e2,
    1.712047612634070e3,
    2.051078377826071e3,
    1.230339354797997e3,
    2.153115354744038e-8,
];
const ERF_D: [f64; 8] = [
    1.574492611070983e1,
    1.176939508913124e2,
    5.371811018620098e2,
    1.621389574566690e3,
    3.290799235733459e3,
    4.362619090143247e3,
    3.439367674143721e3,
    1.230339354803749e3,
];

// Cody's coefficients for erfc on x > 4.
const ERF_P: [f64; 6] = [
    3.053266349612323e-1,
    3.604448996558107e-1,
    1.257817261112292e-1,
    1.608378514874227e-2,
    6.587491615298378e-4,
    1.631538713730209e-2,
];
const ERF_Q: [f64; 5] = [
    2.568520192289822e0,
    1.872952849923460e0,
    5.279051029514284e-1,
    6.051834131244131e-2,
    2.335204976268691e-3,
];

/// erf(x) for |x| <= 0.46875.
fn erf_small<R: Real>(x: R) -> R {
    let z = x * x;
    let a4 = real::<R>(ERF_A[4]);
    let mut num = a4 * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + real(ERF_A[i])) * z;
        den = (den + real(ERF_B[i])) * z;
    }
    x * (num + real(ERF_A[3])) / (den + real(ERF_B[3]))
}

/// erfc(x) for 0.46875 < x <= 4.
fn erfc_mid<R: Real>(x: R) -> R {
    let c8 = real::<R>(ERF_C[8]);
    let mut num = c8 * x;
    let mut den = x;
    for i in 0..7 {
        num = (num + real(ERF_C[i])) * x;
        den = (den + real(ERF_D[i])) * x;
    }
    let r = (num + real(ERF_C[7])) / (den + real(ERF_D[7]));
    exp_neg_sq(x) * r
}

/// erfc(x) for x > 4.
fn erfc_large<R: Real>(x: R) -> R {
    let inv_sqrt_pi = real::<R>(0.564_189_583_547_756_3);
    let z = (x * x).recip();
    let p5 = real::<R>(ERF_P[5]);
    let mut num = p5 * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + real(ERF_P[i])) * z;
        den = (den + real(ERF_Q[i])) * z;
    }
    let r = z * (num + real(ERF_P[4])) / (den + real(ERF_Q[4]));
    exp_neg_sq(x) * (inv_sqrt_pi - r) / x
}

/// exp(-x^2) split to avoid cancellation in the exponent for large x.
fn exp_neg_sq<R: Real>(x: R) -> R {
    let sixteen = real::<R>(16.0);
    let xsq = (x * sixteen).floor() / sixteen;
    let del = (x - xsq) * (x + xsq);
    (-xsq * xsq).exp() * (-del).exp()
}

/// Complementary error function, valid for all finite x.
pub fn erfc<R: Real>(x: R) -> R {
    let ax = x.abs();
    let thresh = real::<R>(0.46875);
    let four = real::<R>(4.0);
    let val = if ax <= thresh {
        return R::one() - erf_small(x);
    } else if ax <= four {
        erfc_mid(ax)
    } else {
        erfc_large(ax)
    };
    if x < R::zero() {
        real::<R>(2.0) - val
    } else {
        val
    }
}

/// Standard normal density phi(z) = exp(-z^2/2) / sqrt(2 pi).
pub fn normal_pdf<R: Real>(z: R) -> Result<R> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("normal_pdf: non-finite input {z}")));
    }
    let inv_sqrt_2pi = real::<R>(0.398_942_280_401_432_7);
    Ok(inv_sqrt_2pi * (-z * z / real(2.0)).exp())
}

/// Standard normal CDF Phi(z).
///
/// Saturates to exactly 0 or 1 beyond |z| = 38, where the true tail mass is
/// far below subnormal range.
pub fn normal_cdf<R: Real>(z: R) -> Result<Probability<R>> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("normal_cdf: non-finite input {z}")));
    }
    let cutoff = real::<R>(38.0);
    if z > cutoff {
        return Probability::new(R::one());
    }
    if z < -cutoff {
        return Probability::new(R::zero());
    }
    let inv_sqrt2 = real::<R>(std::f64::consts::FRAC_1_SQRT_2);
    let half = real::<R>(0.5);
    let p = half * erfc(-z * inv_sqrt2);
    // Rational round-off can poke a hair outside [0, 1] in the tails.
    Probability::new(p.max(R::zero()).min(R::one()))
}

// Acklam's rational approximation to the inverse normal CDF.
const INV_A: [f64; 6] = [
    -3.969683028665376e1,
    2.209460984245205e2,
    -2.759285104469687e2,
    1.383577518672690e2,
    -3.066479806614716e1,
    2.506628277459239e0,
];
const INV_B: [f64; 5] = [
    -5.447609879822406e1,
    1.615858368580409e2,
    -1.556989798598866e2,
    6.680131188771972e1,
    -1.328068155288572e1,
];
const INV_C: [f64; 6] = [
    -7.784894002430293e-3,
    -3.223964580411365e-1,
    -2.400758277161838e0,
    -2.549732539343734e0,
    4.374664141464968e0,
    2.938163982698783e0,
];
const INV_D: [f64; 4] = [
    7.784695709041462e-3,
    3.224671290700398e-1,
    2.445134137142996e0,
    3.754408661907416e0,
];

fn quantile_seed<R: Real>(p: R) -> R {
    let p_low = real::<R>(0.02425);
    let p_high = R::one() - p_low;
    let half = real::<R>(0.5);
    let two = real::<R>(2.0);
    if p < p_low {
        let q = (-two * p.ln()).sqrt();
        let num = ((((real::<R>(INV_C[0]) * q + real(INV_C[1])) * q + real(INV_C[2])) * q
            + real(INV_C[3]))
            * q
            + real(INV_C[4]))
            * q
            + real(INV_C[5]);
        let den = (((real::<R>(INV_D[0]) * q + real(INV_D[1])) * q + real(INV_D[2])) * q
            + real(INV_D[3]))
            * q
            + R::one();
        num / den
    } else if p <= p_high {
        let q = p - half;
        let r = q * q;
        let num = ((((real::<R>(INV_A[0]) * r + real(INV_A[1])) * r + real(INV_A[2])) * r
            + real(INV_A[3]))
            * r
            + real(INV_A[4]))
            * r
            + real(INV_A[5]);
        let den = ((((real::<R>(INV_B[0]) * r + real(INV_B[1])) * r + real(INV_B[2])) * r
            + real(INV_B[3]))
            * r
            + real(INV_B[4]))
            * r
            + R::one();
        q * num / den
    } else {
        -quantile_seed(R::one() - p)
    }
}

/// Inverse standard normal CDF.
///
/// Requires 0 < p < 1; the endpoints map to infinities and are rejected.
pub fn normal_quantile<R: Real>(p: Probability<R>) -> Result<R> {
    let p = p.value();
    if p <= R::zero() || p >= R::one() {
        return Err(Error::Domain(format!(
            "normal_quantile: p must lie strictly in (0, 1), got {p}"
        )));
    }
    let mut x = quantile_seed(p);
    // Two Halley refinements against the forward CDF.
    for _ in 0..2 {
        let err = normal_cdf(x)?.value() - p;
        let pdf = normal_pdf(x)?;
        if pdf <= R::zero() {
            break;
        }
        let u = err / pdf;
        x = x - u / (R::one() + x * u / real(2.0));
    }
    Ok(x)
}
