//! Truncated cosine-series fits of the design density `p(x)`, the regression
//! function `m(x)` and the scale function `sigma(x)`.
//!
//! Each fit keeps `S + 1` coefficients. The design density is floored at
//! `1/b_n` pointwise; the scale is the positive-part square root of a fitted
//! squared-scale curve, clipped to `[1/b_n, b_n]`. Clipping happens at
//! evaluation time, never on the stored coefficients.

use crate::basis::cosine_phi;
use crate::{Error, Result};

/// Floored cosine-series fit of the design density.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignDensityFit {
    coeffs: Vec<f64>,
    floor: f64,
    n_1: usize,
}

impl DesignDensityFit {
    /// `p(x) = max(1/b_n, sum_s c_s phi_s(x))`.
    pub fn evaluate(&self, x: f64) -> f64 {
        series(&self.coeffs, x).max(self.floor)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn subsample_len(&self) -> usize {
        self.n_1
    }
}

/// Cosine-series fit of the regression function.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    coeffs: Vec<f64>,
}

impl RegressionFit {
    /// `m(x) = sum_s kappa_s phi_s(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        series(&self.coeffs, x)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Clipped square-root fit of the scale function.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFit {
    /// Coefficients of the squared-scale series.
    coeffs: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl ScaleFit {
    /// `sigma(x) = clamp(sqrt(max(series(x), 0)), 1/b_n, b_n)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        series(&self.coeffs, x)
            .max(0.0)
            .sqrt()
            .clamp(self.lo, self.hi)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn clip_bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

fn series(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(s, &c)| c * cosine_phi(s, x))
        .sum()
}

/// Fits the design density from a predictor subsample.
pub fn fit_design_density(xs: &[f64], s: usize, b_n: f64) -> Result<DesignDensityFit> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(&x) = xs.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::PredictorOutOfRange { x });
    }
    let n_1 = xs.len();
    let coeffs = (0..=s)
        .map(|k| xs.iter().map(|&x| cosine_phi(k, x)).sum::<f64>() / n_1 as f64)
        .collect();
    Ok(DesignDensityFit {
        coeffs,
        floor: 1.0 / b_n,
        n_1,
    })
}

/// Fits the regression function from `(x, y)` pairs, weighting each response
/// by the inverse fitted design density:
/// `kappa_s = n_1^{-1} sum_l y_l p(x_l)^{-1} phi_s(x_l)`.
pub fn fit_regression(
    pairs: &[(f64, f64)],
    p_hat: &DesignDensityFit,
    s: usize,
) -> Result<RegressionFit> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let n_1 = pairs.len() as f64;
    let coeffs = (0..=s)
        .map(|k| {
            pairs
                .iter()
                .map(|&(x, y)| y / p_hat.evaluate(x) * cosine_phi(k, x))
                .sum::<f64>()
                / n_1
        })
        .collect();
    Ok(RegressionFit { coeffs })
}

/// Fits the scale function: a regression-style fit with responses
/// `(y_l - m(x_l))^2`, then positive-part square root and clipping to
/// `[1/b_n, b_n]` at evaluation time.
pub fn fit_scale(
    pairs: &[(f64, f64)],
    m_hat: &RegressionFit,
    p_hat: &DesignDensityFit,
    s: usize,
    b_n: f64,
) -> Result<ScaleFit> {
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let squared: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(x, y)| {
            let d = y - m_hat.evaluate(x);
            (x, d * d)
        })
        .collect();
    let fit = fit_regression(&squared, p_hat, s)?;
    Ok(ScaleFit {
        coeffs: fit.coeffs,
        lo: 1.0 / b_n,
        hi: b_n,
    })
}

/// Inflated series cutoff `ceil(n^{1/3} ln(b_n))`: an undersmoothing option
/// kept behind a flag; the default cutoff is the one from
/// [`crate::params::compute_sequences`].
pub fn inflated_cutoff(n: usize, b_n: f64) -> usize {
    ((n as f64).cbrt() * b_n.ln()).ceil() as usize
}
