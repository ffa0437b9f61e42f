//! Seeded data generators, ISE metrics, and the Monte Carlo studies that
//! benchmark the plug-in estimator against the oracle.
//!
//! Reproducibility contract: every study takes a single master seed, each
//! replication derives its own seed through a counter-based splitting rule,
//! and replications run as independent tasks whose results are assembled in
//! index order — concurrent and sequential runs of the same study produce
//! identical reports.

pub mod densities;
pub mod suite;

use crate::ep::{default_truncation, fit_finite, fit_infinite_with, DensityEstimate};
use crate::pipeline::{pinsker_oracle, run_pipeline, ObservationSet, PipelineOptions, SupportSpec};
use crate::{Error, Result};
use densities::{FiniteErrorDensity, InfiniteErrorLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use suite::{DesignDensity, RegressionFn, ScaleFn};

/// Predictor-dependent mixture weight functions `w(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFn {
    /// `w(x) = x`.
    PropX,
    /// `w(x) = 1 - x`.
    OneMinusX,
    Constant {
        value: f64,
    },
}

impl WeightFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            WeightFn::PropX => x,
            WeightFn::OneMinusX => 1.0 - x,
            WeightFn::Constant { value } => value,
        }
    }
}

/// A conditional mixture component for the dependent-error model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependentComponent {
    pub weight: WeightFn,
    pub density: FiniteErrorDensity,
}

/// Error model: which law drives the noise and on which support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "support", rename_all = "snake_case")]
pub enum ErrorModel {
    /// Finite-support errors, i.i.d. across observations. The raw density on
    /// `[0, 1]` is standardized to zero mean and unit variance before it
    /// multiplies the scale function.
    Finite { density: FiniteErrorDensity },
    /// Infinite-support errors, i.i.d.; homoscedastic model only.
    Infinite { law: InfiniteErrorLaw },
    /// Finite-support errors whose conditional density given `X = x` is a
    /// mixture with x-dependent weights; the estimation target is the
    /// marginal density.
    DependentFinite { components: Vec<DependentComponent> },
}

/// Full data-generating configuration for one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    pub regression: RegressionFn,
    pub scale: ScaleFn,
    pub design: DesignDensity,
    pub error: ErrorModel,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        self.regression.validate()?;
        self.scale.validate()?;
        self.design.validate()?;
        match &self.error {
            ErrorModel::Finite { density } => density.validate(),
            ErrorModel::Infinite { law } => {
                law.validate()?;
                if !self.scale.is_unit() {
                    return Err(Error::ConfigError(
                        "infinite-support model requires unit scale".into(),
                    ));
                }
                Ok(())
            }
            ErrorModel::DependentFinite { components } => {
                if components.is_empty() {
                    return Err(Error::ConfigError(
                        "dependent model needs components".into(),
                    ));
                }
                for c in components {
                    c.density.validate()?;
                }
                // Weights must be a probability vector at every x.
                for i in 0..=50 {
                    let x = i as f64 / 50.0;
                    let mut total = 0.0;
                    for c in components {
                        let w = c.weight.eval(x);
                        if w < -1e-12 {
                            return Err(Error::ConfigError(format!(
                                "mixture weight negative at x = {x}"
                            )));
                        }
                        total += w;
                    }
                    if (total - 1.0).abs() > 1e-9 {
                        return Err(Error::ConfigError(format!(
                            "mixture weights sum to {total} at x = {x}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// The support spec the estimation side should use for this model.
    pub fn support(&self) -> SupportSpec {
        match &self.error {
            ErrorModel::Finite { density } => standardized_support(density.mean(), density.sd()),
            ErrorModel::Infinite { .. } => SupportSpec::Infinite,
            ErrorModel::DependentFinite { .. } => {
                let marginal = self.marginal_density().expect("validated");
                standardized_support(marginal.mean(), marginal.sd())
            }
        }
    }

    /// Marginal error density `f(u) = sum_i wbar_i f_i(u)` with
    /// `wbar_i = int w_i(x) p(x) dx`; for the i.i.d. models this is just the
    /// configured density.
    pub fn marginal_density(&self) -> Result<FiniteErrorDensity> {
        match &self.error {
            ErrorModel::Finite { density } => Ok(density.clone()),
            ErrorModel::Infinite { .. } => Err(Error::ConfigError(
                "marginal density is finite-support only".into(),
            )),
            ErrorModel::DependentFinite { components } => {
                let comps = components
                    .iter()
                    .map(|c| densities::MixtureComponent {
                        weight: self.average_weight(&c.weight),
                        density: c.density.clone(),
                    })
                    .collect();
                Ok(FiniteErrorDensity::Mixture { components: comps })
            }
        }
    }

    /// `int_0^1 w(x) p(x) dx`, exact for the uniform design, Simpson otherwise.
    fn average_weight(&self, w: &WeightFn) -> f64 {
        if let DesignDensity::Uniform = self.design {
            return match *w {
                WeightFn::PropX | WeightFn::OneMinusX => 0.5,
                WeightFn::Constant { value } => value,
            };
        }
        let m = 2000usize;
        let h = 1.0 / m as f64;
        let mut acc = 0.0;
        for i in 0..=m {
            let x = i as f64 * h;
            let c = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += c * w.eval(x) * self.design.pdf(x);
        }
        acc * h / 3.0
    }
}

fn standardized_support(mean: f64, sd: f64) -> SupportSpec {
    SupportSpec::Finite {
        a: -mean / sd,
        b: 1.0 / sd,
    }
}

/// The evaluable true density a generator hands back for scoring.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueDensity {
    /// Density of the transformed (unit-interval) errors.
    Finite(FiniteErrorDensity),
    /// Density of the raw errors on the line.
    Infinite(InfiniteErrorLaw),
}

impl TrueDensity {
    pub fn pdf(&self, u: f64) -> f64 {
        match self {
            TrueDensity::Finite(d) => d.pdf(u),
            TrueDensity::Infinite(l) => l.pdf(u),
        }
    }
}

/// One generated dataset plus everything the oracle needs.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub obs: ObservationSet,
    /// Unit-interval errors (finite) or raw errors (infinite), full length n.
    pub errors: Vec<f64>,
    pub truth: TrueDensity,
    pub support: SupportSpec,
}

/// Draws a dataset from the configured model.
///
/// Per observation the stream is consumed in a fixed order — predictor
/// first, then the error draw (mixtures spend one extra uniform on the
/// component pick) — so a fixed seed yields a bit-identical dataset.
pub fn generate<R: Rng>(config: &ModelConfig, rng: &mut R) -> Result<GeneratedData> {
    config.validate()?;
    let n = config.n;
    let mut pairs = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    match &config.error {
        ErrorModel::Finite { density } => {
            let (mu, sd) = (density.mean(), density.sd());
            for _ in 0..n {
                let x = config.design.sample(rng);
                let eps = density.sample(rng);
                let xi = (eps - mu) / sd;
                pairs.push((x, config.regression.eval(x) + config.scale.eval(x) * xi));
                errors.push(eps);
            }
            Ok(GeneratedData {
                obs: ObservationSet::new(pairs)?,
                errors,
                truth: TrueDensity::Finite(density.clone()),
                support: standardized_support(mu, sd),
            })
        }
        ErrorModel::Infinite { law } => {
            for _ in 0..n {
                let x = config.design.sample(rng);
                let xi = law.sample(rng);
                pairs.push((x, config.regression.eval(x) + xi));
                errors.push(xi);
            }
            Ok(GeneratedData {
                obs: ObservationSet::new(pairs)?,
                errors,
                truth: TrueDensity::Infinite(law.clone()),
                support: SupportSpec::Infinite,
            })
        }
        ErrorModel::DependentFinite { components } => {
            let marginal = config.marginal_density()?;
            let (mu, sd) = (marginal.mean(), marginal.sd());
            for _ in 0..n {
                let x = config.design.sample(rng);
                // Component pick from the conditional weights at x.
                let pick: f64 = rng.gen();
                let mut acc = 0.0;
                let mut chosen = components.len() - 1;
                for (i, c) in components.iter().enumerate() {
                    acc += c.weight.eval(x);
                    if pick < acc {
                        chosen = i;
                        break;
                    }
                }
                let eps = components[chosen].density.sample(rng);
                let xi = (eps - mu) / sd;
                pairs.push((x, config.regression.eval(x) + config.scale.eval(x) * xi));
                errors.push(eps);
            }
            Ok(GeneratedData {
                obs: ObservationSet::new(pairs)?,
                errors,
                truth: TrueDensity::Finite(marginal),
                support: standardized_support(mu, sd),
            })
        }
    }
}

/// Uniform grid of `points` values over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// Default scoring grid on the unit interval (1001 points).
pub fn unit_grid() -> Vec<f64> {
    linear_grid(0.0, 1.0, 1001)
}

/// Trapezoid integrated squared error of `estimate` against `truth` on `grid`.
pub fn ise(estimate: &DensityEstimate, truth: &TrueDensity, grid: &[f64]) -> Result<f64> {
    ise_fn(&|z| estimate.evaluate(z), &|z| truth.pdf(z), grid)
}

/// ISE between two evaluable curves.
pub fn ise_fn(f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64, grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::GridError("ISE grid needs at least 2 points"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::GridError("ISE grid must be strictly increasing"));
    }
    let mut acc = 0.0;
    let mut prev = {
        let d = f(grid[0]) - g(grid[0]);
        d * d
    };
    for w in grid.windows(2) {
        let d = f(w[1]) - g(w[1]);
        let sq = d * d;
        acc += 0.5 * (sq + prev) * (w[1] - w[0]);
        prev = sq;
    }
    Ok(acc)
}

/// Which pair of fits a replication compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StudyKind {
    /// Oracle on true errors vs. the plug-in estimate; ratio = oracle/estimate.
    #[default]
    OracleVsPlugin,
    /// Raw-residual fit (scale treated as known unit) vs. the rescaled-residual
    /// fit, on homoscedastic finite-support data; ratio = raw/rescaled.
    RescaleRobustness,
}

/// One replication's scores. `ratio = ise_benchmark / ise_estimate`, where the
/// benchmark is the oracle (or the raw-residual fit in the rescaling study).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub ise_benchmark: f64,
    pub ise_estimate: f64,
    pub ratio: f64,
}

/// Aggregated Monte Carlo results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub study: StudyKind,
    pub replications: Vec<Replication>,
    /// Sample mean of the ratios.
    pub mean: f64,
    /// Sample median of the ratios.
    pub median: f64,
    /// Sample standard deviation of the ratios; 0 by convention for one rep.
    pub std: f64,
}

impl SimulationReport {
    fn from_replications(
        n: usize,
        master_seed: u64,
        study: StudyKind,
        replications: Vec<Replication>,
    ) -> Self {
        let ratios: Vec<f64> = replications.iter().map(|r| r.ratio).collect();
        let (mean, median, std) = summarize(&ratios);
        SimulationReport {
            n,
            reps: replications.len(),
            master_seed,
            study,
            replications,
            mean,
            median,
            std,
        }
    }
}

/// Mean, median and sample standard deviation of a nonempty slice.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let k = values.len();
    let mean = values.iter().sum::<f64>() / k as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let std = if k < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64).sqrt()
    };
    (mean, median, std)
}

/// Counter-based seed splitting (SplitMix64 finalizer), so replication `i`'s
/// stream does not depend on execution order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs one seeded replication of the configured study.
pub fn run_replication(config: &ModelConfig, seed: u64, study: StudyKind) -> Result<Replication> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = generate(config, &mut rng)?;
    match study {
        StudyKind::OracleVsPlugin => {
            let run = run_pipeline(&data.obs, &data.support, &PipelineOptions::default())?;
            let oracle = pinsker_oracle(&data.errors, &data.support)?;
            let grid = scoring_grid(&data.support, &run.residuals);
            let ise_est = ise(&run.estimate, &data.truth, &grid)?;
            let ise_orc = ise(&oracle, &data.truth, &grid)?;
            if ise_est == 0.0 {
                return Err(Error::ZeroIse);
            }
            Ok(Replication {
                ise_benchmark: ise_orc,
                ise_estimate: ise_est,
                ratio: ise_orc / ise_est,
            })
        }
        StudyKind::RescaleRobustness => {
            if !matches!(data.support, SupportSpec::Finite { .. }) {
                return Err(Error::ConfigError(
                    "rescaling study needs a finite-support model".into(),
                ));
            }
            let rescaled = run_pipeline(&data.obs, &data.support, &PipelineOptions::default())?;
            let raw = run_pipeline(
                &data.obs,
                &data.support,
                &PipelineOptions {
                    rescale: false,
                    ..Default::default()
                },
            )?;
            let grid = unit_grid();
            let ise_rescaled = ise(&rescaled.estimate, &data.truth, &grid)?;
            let ise_raw = ise(&raw.estimate, &data.truth, &grid)?;
            if ise_rescaled == 0.0 {
                return Err(Error::ZeroIse);
            }
            Ok(Replication {
                ise_benchmark: ise_raw,
                ise_estimate: ise_rescaled,
                ratio: ise_raw / ise_rescaled,
            })
        }
    }
}

fn scoring_grid(support: &SupportSpec, residuals: &[f64]) -> Vec<f64> {
    match support {
        SupportSpec::Finite { .. } => unit_grid(),
        SupportSpec::Infinite => {
            let t = default_truncation(residuals);
            linear_grid(-t, t, 2001)
        }
    }
}

/// Runs `reps` independent seeded replications (in parallel) and aggregates.
pub fn monte_carlo(
    config: &ModelConfig,
    reps: usize,
    master_seed: u64,
) -> Result<SimulationReport> {
    monte_carlo_study(config, reps, master_seed, StudyKind::default())
}

/// [`monte_carlo`] with an explicit study kind.
pub fn monte_carlo_study(
    config: &ModelConfig,
    reps: usize,
    master_seed: u64,
    study: StudyKind,
) -> Result<SimulationReport> {
    if reps == 0 {
        return Err(Error::ConfigError("need at least one replication".into()));
    }
    config.validate()?;
    let replications: Result<Vec<Replication>> = (0..reps)
        .into_par_iter()
        .map(|i| run_replication(config, derive_seed(master_seed, i as u64), study))
        .collect();
    Ok(SimulationReport::from_replications(
        config.n,
        master_seed,
        study,
        replications?,
    ))
}

/// Direct-observation error law for the rate studies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "support", rename_all = "snake_case")]
pub enum DirectLaw {
    Finite { density: FiniteErrorDensity },
    Infinite { law: InfiniteErrorLaw },
}

/// Per-sample-size Monte Carlo MISE and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateStudy {
    pub points: Vec<RatePoint>,
    /// Least-squares slope of `ln MISE` against `ln n`.
    pub slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: usize,
    pub mise: f64,
}

/// Monte Carlo MISE of the density estimator on direct observations across
/// sample sizes, with the default estimator.
pub fn rate_study(
    law: &DirectLaw,
    ns: &[usize],
    reps: usize,
    master_seed: u64,
) -> Result<RateStudy> {
    match law {
        DirectLaw::Finite { .. } => rate_study_with(law, ns, reps, master_seed, |sample| {
            Ok(DensityEstimate::Finite(fit_finite(sample)?))
        }),
        DirectLaw::Infinite { law: l } => {
            let t = l.truncation_hint();
            rate_study_with(law, ns, reps, master_seed, move |sample| {
                Ok(DensityEstimate::Infinite(fit_infinite_with(sample, t)?))
            })
        }
    }
}

/// [`rate_study`] with a custom estimator, for control experiments.
pub fn rate_study_with<F>(
    law: &DirectLaw,
    ns: &[usize],
    reps: usize,
    master_seed: u64,
    fit: F,
) -> Result<RateStudy>
where
    F: Fn(&[f64]) -> Result<DensityEstimate> + Sync,
{
    if ns.len() < 3 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConfigError(
            "rate study needs >= 3 increasing sample sizes".into(),
        ));
    }
    if reps == 0 {
        return Err(Error::ConfigError("need at least one replication".into()));
    }
    let (truth, grid): (TrueDensity, Vec<f64>) = match law {
        DirectLaw::Finite { density } => {
            density.validate()?;
            (TrueDensity::Finite(density.clone()), unit_grid())
        }
        DirectLaw::Infinite { law } => {
            law.validate()?;
            let t = law.truncation_hint();
            (TrueDensity::Infinite(law.clone()), linear_grid(-t, t, 2001))
        }
    };
    let mut points = Vec::with_capacity(ns.len());
    for (ni, &n) in ns.iter().enumerate() {
        let total: Result<Vec<f64>> = (0..reps)
            .into_par_iter()
            .map(|i| {
                let seed = derive_seed(master_seed, (ni * reps + i) as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sample: Vec<f64> = (0..n)
                    .map(|_| match law {
                        DirectLaw::Finite { density } => density.sample(&mut rng),
                        DirectLaw::Infinite { law } => law.sample(&mut rng),
                    })
                    .collect();
                let est = fit(&sample)?;
                ise(&est, &truth, &grid)
            })
            .collect();
        let total = total?;
        points.push(RatePoint {
            n,
            mise: total.iter().sum::<f64>() / reps as f64,
        });
    }
    let slope = loglog_slope(&points);
    Ok(RateStudy { points, slope })
}

fn loglog_slope(points: &[RatePoint]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mise.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
