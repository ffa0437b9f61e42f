//! Transform front-ends: the cosine basis on `[0, 1]` and the empirical
//! characteristic function on the real line.

use crate::{Error, Result};
use num_complex::Complex64;

/// `phi_0 = 1`, `phi_j(x) = sqrt(2) cos(pi j x)` for `j >= 1`.
///
/// Defined for every real `x`; residuals that land slightly outside `[0, 1]`
/// are evaluated as-is, without clipping.
#[inline]
pub fn cosine_phi(j: usize, x: f64) -> f64 {
    if j == 0 {
        1.0
    } else {
        std::f64::consts::SQRT_2 * (std::f64::consts::PI * j as f64 * x).cos()
    }
}

/// Empirical cosine coefficient `r^{-1} sum_l phi_j(z_l)`.
pub fn empirical_fourier(sample: &[f64], j: usize) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let sum: f64 = sample.iter().map(|&z| cosine_phi(j, z)).sum();
    Ok(sum / sample.len() as f64)
}

/// Empirical coefficients `theta_1 ..= theta_j_max` of one sample.
///
/// Every value is bounded by `sqrt(2)` since `|phi_j| <= sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    /// Coefficient for index `j` lives at `values[j - 1]`.
    pub values: Vec<f64>,
    /// Sample count the coefficients were computed from.
    pub r: usize,
}

impl FourierCoefficients {
    pub fn compute(sample: &[f64], j_max: usize) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let r = sample.len();
        let values = (1..=j_max)
            .map(|j| sample.iter().map(|&z| cosine_phi(j, z)).sum::<f64>() / r as f64)
            .collect();
        Ok(Self { values, r })
    }
}

/// Empirical characteristic function of a retained sample.
///
/// Holds an immutable copy of the observations; evaluation is
/// `h(v) = r^{-1} sum_l exp(i v z_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCf {
    sample: Vec<f64>,
}

impl EmpiricalCf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self {
            sample: sample.to_vec(),
        })
    }

    pub fn sample(&self) -> &[f64] {
        &self.sample
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h(v) = r^{-1} sum_l exp(i v z_l)`.
    pub fn eval(&self, v: f64) -> Complex64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &z in &self.sample {
            let (s, c) = (v * z).sin_cos();
            re += c;
            im += s;
        }
        let r = self.sample.len() as f64;
        Complex64::new(re / r, im / r)
    }
}

/// Convenience form of [`EmpiricalCf::eval`] for a borrowed sample.
pub fn empirical_cf(sample: &[f64], v: f64) -> Result<Complex64> {
    Ok(EmpiricalCf::new(sample)?.eval(v))
}
