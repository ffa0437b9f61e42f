//! Density estimation for regression errors.
//!
//! Given scatterplot data `(X_l, Y_l)` from a nonparametric regression, this
//! crate estimates the probability density of the unobservable regression
//! errors by fitting the nuisance curves (design density, regression function,
//! scale function) on data splits, forming residuals, and feeding them to a
//! blockwise-shrinkage orthogonal-series density estimator. The same
//! estimator applied to the true errors is the benchmark ("Pinsker oracle"),
//! and [`simlab`] provides seeded Monte Carlo machinery to measure how close
//! the plug-in estimate comes to that benchmark.
//!
//! Error densities supported on a known finite interval `[a, a + b]` use a
//! cosine series on `[0, 1]` after a location-scale transform; densities
//! supported on the whole real line go through the empirical characteristic
//! function and Fourier inversion over frequency blocks.
//!
//! Entry points:
//! - [`pipeline::estimate_error_density`] — end-to-end plug-in estimate.
//! - [`pipeline::pinsker_oracle`] — the benchmark fit on true errors.
//! - [`ep::fit_finite`] / [`ep::fit_infinite`] — the raw density estimators.
//! - [`simlab::monte_carlo`] / [`simlab::rate_study`] — simulation studies.

pub mod basis;
pub mod ep;
pub mod nuisance;
pub mod params;
pub mod pipeline;
pub mod simlab;
pub mod theory;

use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `min(n_1, n_2) <= 4` or a fit was requested on fewer than 5 points.
    SampleTooSmall { n: usize, detail: &'static str },
    /// An operation received an empty sample.
    EmptySample,
    /// A predictor fell outside `[0, 1]`.
    PredictorOutOfRange { x: f64 },
    /// Infinite-support split ranges would collide.
    OverlapError { n: usize, n1: usize },
    /// Nonnegative projection of an estimate with zero clipped mass.
    DegenerateEstimate,
    /// A scalar argument fell outside the formula's domain.
    DomainError(&'static str),
    /// A simulation configuration failed validation.
    ConfigError(String),
    /// An evaluation grid was unusable (unsorted or too short).
    GridError(&'static str),
    /// The ISE in a ratio denominator was exactly zero.
    ZeroIse,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SampleTooSmall { n, detail } => {
                write!(f, "sample too small (n = {n}): {detail}")
            }
            Error::EmptySample => write!(f, "empty sample"),
            Error::PredictorOutOfRange { x } => {
                write!(f, "predictor {x} outside [0, 1]")
            }
            Error::OverlapError { n, n1 } => {
                write!(f, "split ranges overlap for n = {n}, n_1 = {n1}")
            }
            Error::DegenerateEstimate => {
                write!(f, "estimate is nonpositive everywhere; cannot renormalize")
            }
            Error::DomainError(what) => write!(f, "domain error: {what}"),
            Error::ConfigError(what) => write!(f, "invalid configuration: {what}"),
            Error::GridError(what) => write!(f, "bad grid: {what}"),
            Error::ZeroIse => write!(f, "ISE denominator is zero"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
