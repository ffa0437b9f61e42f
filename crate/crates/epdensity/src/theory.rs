//! Minimax constants, normalizing factors, and function-class membership
//! functionals used by the rate studies.

use crate::{Error, Result};
use std::f64::consts::PI;

/// Sobolev-type class: densities with `alpha` square-integrable derivatives
/// and radius `Q`, described on `[0, 1]` through the weighted coefficient sum
/// `sum_j (1 + (pi j)^{2 alpha}) theta_j^2 <= Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevClass {
    pub alpha: f64,
    pub q: f64,
}

/// Analytic-type class: densities extendable to a strip of half-width
/// `gamma`, described on `[0, 1]` through
/// `sum_j (1 + e^{2 pi gamma j}) theta_j^2 <= Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticClass {
    pub gamma: f64,
    pub q: f64,
}

/// The sharp risk constant for Sobolev classes:
/// `(2a + 1) [pi (2a + 1)(a + 1)/a]^{-2a/(2a+1)} Q^{1/(2a+1)}`.
pub fn pinsker_constant(alpha: f64, q: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 || !q.is_finite() || q <= 0.0 {
        return Err(Error::DomainError(
            "pinsker_constant needs alpha > 0 and Q > 0",
        ));
    }
    let two_a1 = 2.0 * alpha + 1.0;
    let base = PI * two_a1 * (alpha + 1.0) / alpha;
    Ok(two_a1 * base.powf(-2.0 * alpha / two_a1) * q.powf(1.0 / two_a1))
}

/// Normalizing factor for Sobolev classes:
/// `sqrt(n^{2a/(2a+1)} / P(a, Q))`.
pub fn sobolev_rate_factor(n: usize, alpha: f64, q: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::DomainError("sobolev_rate_factor needs n >= 1"));
    }
    let p = pinsker_constant(alpha, q)?;
    let pow = (n as f64).powf(2.0 * alpha / (2.0 * alpha + 1.0));
    Ok((pow / p).sqrt())
}

/// Normalizing factor for analytic classes: `sqrt(2 pi gamma n / ln n)`.
pub fn analytic_rate_factor(n: usize, gamma: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DomainError("analytic_rate_factor needs n >= 2"));
    }
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::DomainError("analytic_rate_factor needs gamma > 0"));
    }
    let nf = n as f64;
    Ok((2.0 * PI * gamma * nf / nf.ln()).sqrt())
}

/// Which weighted coefficient sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FunctionClass {
    Sobolev(SobolevClass),
    Analytic(AnalyticClass),
}

/// Membership functional of a coefficient sequence `theta_1, theta_2, ...`
/// for the given class.
pub fn class_norm(coeffs: &[f64], class: FunctionClass) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &th)| {
            let j = (i + 1) as f64;
            let weight = match class {
                FunctionClass::Sobolev(SobolevClass { alpha, .. }) => {
                    1.0 + (PI * j).powf(2.0 * alpha)
                }
                FunctionClass::Analytic(AnalyticClass { gamma, .. }) => {
                    1.0 + (2.0 * PI * gamma * j).exp()
                }
            };
            weight * th * th
        })
        .sum()
}
