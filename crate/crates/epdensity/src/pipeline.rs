//! Data splitting, residual construction, and the end-to-end plug-in
//! error-density estimator, plus the benchmark oracle fit on true errors.
//!
//! Observations are consumed in the given order: the first `n_1` fit the
//! design density, the next `n_1` the regression, the next `n_1` the scale
//! (finite support only), and the trailing stretch supplies the residuals.
//! No shuffling happens here; callers that need it (sorted real datasets)
//! shuffle up front.

use crate::ep::{fit_finite, fit_infinite, DensityEstimate};
use crate::nuisance::{
    fit_design_density, fit_regression, fit_scale, inflated_cutoff, RegressionFit, ScaleFit,
};
use crate::params::{compute_sequences, SupportKind, TuningSequences};
use crate::{Error, Result};

/// The regression sample: ordered `(x, y)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    pairs: Vec<(f64, f64)>,
}

impl ObservationSet {
    /// Validates that every predictor lies in `[0, 1]`.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(x, _)) = pairs.iter().find(|&&(x, _)| !(0.0..=1.0).contains(&x)) {
            return Err(Error::PredictorOutOfRange { x });
        }
        Ok(Self { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }
}

/// Support of the error density, with the location-scale map for the finite
/// case: `epsilon = (xi - a) / b` sends `[a, a + b]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportSpec {
    Finite { a: f64, b: f64 },
    Infinite,
}

impl SupportSpec {
    pub fn kind(&self) -> SupportKind {
        match self {
            SupportSpec::Finite { .. } => SupportKind::Finite,
            SupportSpec::Infinite => SupportKind::Infinite,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SupportSpec::Finite { b, .. } if !b.is_finite() || b <= 0.0 => Err(Error::ConfigError(
                "finite support needs width b > 0".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// 1-based inclusive index ranges for the estimation stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitPlan {
    pub n: usize,
    pub kind: SupportKind,
    pub design: (usize, usize),
    pub regression: (usize, usize),
    /// Present for finite support only.
    pub scale: Option<(usize, usize)>,
    /// Residual/density stage.
    pub density: (usize, usize),
}

impl SplitPlan {
    fn slice<'a, T>(&self, data: &'a [T], range: (usize, usize)) -> &'a [T] {
        &data[range.0 - 1..range.1]
    }
}

/// Splits `1..=n` into the estimation stages.
///
/// Finite support: four consecutive ranges of sizes `n_1, n_1, n_1, n_2`.
/// Infinite support: design and regression ranges of size `n_1`, and the
/// trailing `2 n_1` observations for residuals, which must not reach back
/// into the regression range.
pub fn split(n: usize, kind: SupportKind) -> Result<SplitPlan> {
    let t = compute_sequences(n)?;
    let n_1 = t.n_1;
    match kind {
        SupportKind::Finite => Ok(SplitPlan {
            n,
            kind,
            design: (1, n_1),
            regression: (n_1 + 1, 2 * n_1),
            scale: Some((2 * n_1 + 1, 3 * n_1)),
            density: (3 * n_1 + 1, n),
        }),
        SupportKind::Infinite => {
            // Residual range (n - 2 n_1, n] must start past the regression
            // range, i.e. n - 2 n_1 + 1 > 2 n_1.
            if n < 4 * n_1 {
                return Err(Error::OverlapError { n, n1: n_1 });
            }
            let start = n - 2 * n_1 + 1;
            Ok(SplitPlan {
                n,
                kind,
                design: (1, n_1),
                regression: (n_1 + 1, 2 * n_1),
                scale: None,
                density: (start, n),
            })
        }
    }
}

/// Rescaled residuals for the finite-support (heteroscedastic) case:
/// `(y - m(x)) / (b sigma(x)) - a/b` over the density range. Values are not
/// clipped to `[0, 1]`.
///
/// The arithmetic is performed exactly in this order — numerator, then the
/// product `b * sigma(x)`, then the quotient, then subtracting the
/// precomputed `a/b` — so that exact nuisance functions reproduce the
/// underlying errors bit-for-bit when the data were built the same way.
pub fn rescaled_residuals(
    obs: &ObservationSet,
    m_hat: &dyn Fn(f64) -> f64,
    sigma_hat: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    plan: &SplitPlan,
) -> Vec<f64> {
    let a_over_b = a / b;
    plan.slice(obs.pairs(), plan.density)
        .iter()
        .map(|&(x, y)| (y - m_hat(x)) / (b * sigma_hat(x)) - a_over_b)
        .collect()
}

/// Raw residuals for the infinite-support (homoscedastic) case:
/// `y - m(x)` over the density range.
pub fn residuals(obs: &ObservationSet, m_hat: &dyn Fn(f64) -> f64, plan: &SplitPlan) -> Vec<f64> {
    plan.slice(obs.pairs(), plan.density)
        .iter()
        .map(|&(x, y)| y - m_hat(x))
        .collect()
}

/// Exact nuisance functions injected in place of the fitted stages.
pub struct ExactNuisance<'a> {
    pub m: &'a (dyn Fn(f64) -> f64 + Sync),
    pub sigma: &'a (dyn Fn(f64) -> f64 + Sync),
    pub design: &'a (dyn Fn(f64) -> f64 + Sync),
}

/// Where the pipeline takes its nuisance curves from.
pub enum NuisanceSource<'a> {
    /// Fit them on the data splits (the standard plug-in estimator).
    Fitted,
    /// Use the supplied exact functions; the fitting stages are skipped and
    /// residuals are computed from these directly.
    Exact(ExactNuisance<'a>),
}

/// Pipeline knobs beyond the defaults.
pub struct PipelineOptions<'a> {
    pub nuisance: NuisanceSource<'a>,
    /// Finite support: divide residuals by the fitted scale (default) or
    /// treat the model as homoscedastic with unit scale.
    pub rescale: bool,
    /// Use the inflated series cutoff for nuisance fits.
    pub inflated_s: bool,
}

impl Default for PipelineOptions<'static> {
    fn default() -> Self {
        Self {
            nuisance: NuisanceSource::Fitted,
            rescale: true,
            inflated_s: false,
        }
    }
}

/// Everything a pipeline run produces besides the estimate itself.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub estimate: DensityEstimate,
    pub sequences: TuningSequences,
    pub plan: SplitPlan,
    pub residuals: Vec<f64>,
    /// Finite support: how many residuals fell outside `[0, 1]`.
    pub residuals_outside_unit: usize,
}

enum MEval<'a> {
    Fit(RegressionFit),
    Exact(&'a (dyn Fn(f64) -> f64 + Sync)),
}

impl MEval<'_> {
    fn at(&self, x: f64) -> f64 {
        match self {
            MEval::Fit(f) => f.evaluate(x),
            MEval::Exact(f) => f(x),
        }
    }
}

enum SigEval<'a> {
    Fit(ScaleFit),
    Exact(&'a (dyn Fn(f64) -> f64 + Sync)),
    One,
}

impl SigEval<'_> {
    fn at(&self, x: f64) -> f64 {
        match self {
            SigEval::Fit(f) => f.evaluate(x),
            SigEval::Exact(f) => f(x),
            SigEval::One => 1.0,
        }
    }
}

/// End-to-end plug-in estimate with default options.
pub fn estimate_error_density(
    obs: &ObservationSet,
    support: &SupportSpec,
) -> Result<DensityEstimate> {
    Ok(run_pipeline(obs, support, &PipelineOptions::default())?.estimate)
}

/// End-to-end plug-in estimate with explicit options; returns the full run.
pub fn run_pipeline(
    obs: &ObservationSet,
    support: &SupportSpec,
    options: &PipelineOptions<'_>,
) -> Result<PipelineRun> {
    support.validate()?;
    let n = obs.len();
    let sequences = compute_sequences(n)?;
    let plan = split(n, support.kind())?;
    let s = if options.inflated_s {
        inflated_cutoff(n, sequences.b_n)
    } else {
        sequences.s
    };

    let xs_design: Vec<f64> = plan
        .slice(obs.pairs(), plan.design)
        .iter()
        .map(|p| p.0)
        .collect();
    let pairs_reg = plan.slice(obs.pairs(), plan.regression);

    let (m_eval, sig_eval) = match &options.nuisance {
        NuisanceSource::Fitted => {
            let p_hat = fit_design_density(&xs_design, s, sequences.b_n)?;
            let m_hat = fit_regression(pairs_reg, &p_hat, s)?;
            let sig = match (support, options.rescale) {
                (SupportSpec::Finite { .. }, true) => {
                    let pairs_scale = plan.slice(obs.pairs(), plan.scale.unwrap());
                    SigEval::Fit(fit_scale(pairs_scale, &m_hat, &p_hat, s, sequences.b_n)?)
                }
                _ => SigEval::One,
            };
            (MEval::Fit(m_hat), sig)
        }
        NuisanceSource::Exact(exact) => {
            let sig = match (support, options.rescale) {
                (SupportSpec::Finite { .. }, true) => SigEval::Exact(exact.sigma),
                _ => SigEval::One,
            };
            (MEval::Exact(exact.m), sig)
        }
    };

    match *support {
        SupportSpec::Finite { a, b } => {
            let m_fn = |x: f64| m_eval.at(x);
            let s_fn = |x: f64| sig_eval.at(x);
            let res = rescaled_residuals(obs, &m_fn, &s_fn, a, b, &plan);
            let outside = res.iter().filter(|&&z| !(0.0..=1.0).contains(&z)).count();
            let estimate = DensityEstimate::Finite(fit_finite(&res)?);
            Ok(PipelineRun {
                estimate,
                sequences,
                plan,
                residuals: res,
                residuals_outside_unit: outside,
            })
        }
        SupportSpec::Infinite => {
            let m_fn = |x: f64| m_eval.at(x);
            let res = residuals(obs, &m_fn, &plan);
            let estimate = DensityEstimate::Infinite(fit_infinite(&res)?);
            Ok(PipelineRun {
                estimate,
                sequences,
                plan,
                residuals: res,
                residuals_outside_unit: 0,
            })
        }
    }
}

/// Benchmark fit on the true errors.
///
/// `errors` is the full length-`n` error vector (transformed errors for
/// finite support, raw errors for infinite support); the fit uses the same
/// trailing subvector the plug-in pipeline uses for residuals — the last
/// `n_2` entries (finite) or the last `2 n_1` entries (infinite).
pub fn pinsker_oracle(errors: &[f64], support: &SupportSpec) -> Result<DensityEstimate> {
    support.validate()?;
    let n = errors.len();
    let t = compute_sequences(n)?;
    match support {
        SupportSpec::Finite { .. } => {
            let z = &errors[n - t.n_2..];
            Ok(DensityEstimate::Finite(fit_finite(z)?))
        }
        SupportSpec::Infinite => {
            if n < 4 * t.n_1 {
                return Err(Error::OverlapError { n, n1: t.n_1 });
            }
            let z = &errors[n - 2 * t.n_1..];
            Ok(DensityEstimate::Infinite(fit_infinite(z)?))
        }
    }
}
