//! Sampleable test densities with analytic moments.
//!
//! Finite-support densities live on `[0, 1]` and are the raw error shapes
//! before the zero-mean/unit-variance standardization the generators apply.
//! Sampling goes through inverse CDFs so a draw consumes exactly one uniform
//! from the stream (mixtures consume one extra for the component pick).

use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};
use std::f64::consts::{PI, SQRT_2};

/// A weighted mixture component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub density: FiniteErrorDensity,
}

/// Test densities on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiniteErrorDensity {
    Uniform,
    /// Normal density restricted to `[0, 1]` and renormalized.
    TruncatedNormal {
        mean: f64,
        sd: f64,
    },
    /// `1 + amplitude sqrt(2) cos(pi frequency u)`: a uniform carrier with a
    /// single cosine ripple, so its only nonzero series coefficient sits at
    /// index `frequency`.
    TexturedUniform {
        amplitude: f64,
        frequency: usize,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
}

impl FiniteErrorDensity {
    pub fn validate(&self) -> Result<()> {
        match self {
            FiniteErrorDensity::Uniform => Ok(()),
            FiniteErrorDensity::TruncatedNormal { sd, .. } => {
                if *sd > 0.0 {
                    Ok(())
                } else {
                    Err(Error::ConfigError("truncated normal needs sd > 0".into()))
                }
            }
            FiniteErrorDensity::TexturedUniform {
                amplitude,
                frequency,
            } => {
                if amplitude.abs() * SQRT_2 >= 1.0 {
                    return Err(Error::ConfigError(
                        "texture amplitude must satisfy |amplitude| sqrt(2) < 1".into(),
                    ));
                }
                if *frequency == 0 {
                    return Err(Error::ConfigError("texture frequency must be >= 1".into()));
                }
                Ok(())
            }
            FiniteErrorDensity::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::ConfigError("empty mixture".into()));
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if components.iter().any(|c| c.weight < 0.0) || (total - 1.0).abs() > 1e-9 {
                    return Err(Error::ConfigError(
                        "mixture weights must be nonnegative and sum to 1".into(),
                    ));
                }
                components.iter().try_for_each(|c| c.density.validate())
            }
        }
    }

    pub fn pdf(&self, u: f64) -> f64 {
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        match self {
            FiniteErrorDensity::Uniform => 1.0,
            FiniteErrorDensity::TruncatedNormal { mean, sd } => {
                let n = Normal::new(*mean, *sd).expect("validated");
                n.pdf(u) / truncation_mass(*mean, *sd)
            }
            FiniteErrorDensity::TexturedUniform {
                amplitude,
                frequency,
            } => 1.0 + amplitude * SQRT_2 * (PI * *frequency as f64 * u).cos(),
            FiniteErrorDensity::Mixture { components } => {
                components.iter().map(|c| c.weight * c.density.pdf(u)).sum()
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            FiniteErrorDensity::Uniform => 0.5,
            FiniteErrorDensity::TruncatedNormal { mean, sd } => {
                let (alpha, beta) = ((0.0 - mean) / sd, (1.0 - mean) / sd);
                let z = truncation_mass(*mean, *sd);
                mean + sd * (std_normal_pdf(alpha) - std_normal_pdf(beta)) / z
            }
            FiniteErrorDensity::TexturedUniform {
                amplitude,
                frequency,
            } => {
                // int_0^1 u cos(pi j u) du = (cos(pi j) - 1) / (pi j)^2
                let j = *frequency as f64;
                let i1 = ((PI * j).cos() - 1.0) / (PI * j).powi(2);
                0.5 + amplitude * SQRT_2 * i1
            }
            FiniteErrorDensity::Mixture { components } => {
                components.iter().map(|c| c.weight * c.density.mean()).sum()
            }
        }
    }

    /// Raw second moment `E[U^2]`.
    fn second_moment(&self) -> f64 {
        match self {
            FiniteErrorDensity::Uniform => 1.0 / 3.0,
            FiniteErrorDensity::TruncatedNormal { mean, sd } => {
                let (alpha, beta) = ((0.0 - mean) / sd, (1.0 - mean) / sd);
                let z = truncation_mass(*mean, *sd);
                let m1 = self.mean();
                let var = sd
                    * sd
                    * (1.0 + (alpha * std_normal_pdf(alpha) - beta * std_normal_pdf(beta)) / z
                        - ((std_normal_pdf(alpha) - std_normal_pdf(beta)) / z).powi(2));
                var + m1 * m1
            }
            FiniteErrorDensity::TexturedUniform {
                amplitude,
                frequency,
            } => {
                // int_0^1 u^2 cos(pi j u) du = 2 cos(pi j) / (pi j)^2 for integer j
                let j = *frequency as f64;
                let i2 = 2.0 * (PI * j).cos() / (PI * j).powi(2);
                1.0 / 3.0 + amplitude * SQRT_2 * i2
            }
            FiniteErrorDensity::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.density.second_moment())
                .sum(),
        }
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// One draw via inverse CDF (mixtures draw the component first).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            FiniteErrorDensity::Uniform => rng.gen::<f64>(),
            FiniteErrorDensity::TruncatedNormal { mean, sd } => {
                let n = Normal::new(*mean, *sd).expect("validated");
                let lo = n.cdf(0.0);
                let hi = n.cdf(1.0);
                let u = lo + rng.gen::<f64>() * (hi - lo);
                n.inverse_cdf(u).clamp(0.0, 1.0)
            }
            FiniteErrorDensity::TexturedUniform {
                amplitude,
                frequency,
            } => {
                let j = *frequency as f64;
                let kappa = *amplitude;
                let target = rng.gen::<f64>();
                invert_monotone_cdf(
                    |x| x + kappa * SQRT_2 * (PI * j * x).sin() / (PI * j),
                    target,
                )
            }
            FiniteErrorDensity::Mixture { components } => {
                let pick = rng.gen::<f64>();
                let mut acc = 0.0;
                for c in components {
                    acc += c.weight;
                    if pick < acc {
                        return c.density.sample(rng);
                    }
                }
                components
                    .last()
                    .expect("validated nonempty")
                    .density
                    .sample(rng)
            }
        }
    }
}

/// Error laws on the real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfiniteErrorLaw {
    Gaussian { mean: f64, sd: f64 },
    GaussianMixture { components: Vec<GaussianComponent> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

impl InfiniteErrorLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            InfiniteErrorLaw::Gaussian { sd, .. } => {
                if *sd > 0.0 {
                    Ok(())
                } else {
                    Err(Error::ConfigError("gaussian law needs sd > 0".into()))
                }
            }
            InfiniteErrorLaw::GaussianMixture { components } => {
                if components.is_empty() {
                    return Err(Error::ConfigError("empty gaussian mixture".into()));
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if components.iter().any(|c| c.weight < 0.0 || c.sd <= 0.0)
                    || (total - 1.0).abs() > 1e-9
                {
                    return Err(Error::ConfigError(
                        "gaussian mixture needs nonnegative weights summing to 1 and sd > 0".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn pdf(&self, z: f64) -> f64 {
        match self {
            InfiniteErrorLaw::Gaussian { mean, sd } => gaussian_pdf(z, *mean, *sd),
            InfiniteErrorLaw::GaussianMixture { components } => components
                .iter()
                .map(|c| c.weight * gaussian_pdf(z, c.mean, c.sd))
                .sum(),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            InfiniteErrorLaw::Gaussian { mean, sd } => {
                let n = Normal::new(*mean, *sd).expect("validated");
                n.inverse_cdf(rng.gen::<f64>())
            }
            InfiniteErrorLaw::GaussianMixture { components } => {
                let pick = rng.gen::<f64>();
                let mut acc = 0.0;
                for c in components {
                    acc += c.weight;
                    if pick < acc {
                        let n = Normal::new(c.mean, c.sd).expect("validated");
                        return n.inverse_cdf(rng.gen::<f64>());
                    }
                }
                let c = components.last().expect("validated nonempty");
                Normal::new(c.mean, c.sd)
                    .expect("validated")
                    .inverse_cdf(rng.gen::<f64>())
            }
        }
    }

    /// A deterministic evaluation radius covering essentially all mass:
    /// `max_i (|mean_i| + 6 sd_i)`.
    pub fn truncation_hint(&self) -> f64 {
        match self {
            InfiniteErrorLaw::Gaussian { mean, sd } => mean.abs() + 6.0 * sd,
            InfiniteErrorLaw::GaussianMixture { components } => components
                .iter()
                .map(|c| c.mean.abs() + 6.0 * c.sd)
                .fold(0.0, f64::max),
        }
    }
}

fn gaussian_pdf(z: f64, mean: f64, sd: f64) -> f64 {
    let d = (z - mean) / sd;
    (-0.5 * d * d).exp() / (sd * (2.0 * PI).sqrt())
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

fn truncation_mass(mean: f64, sd: f64) -> f64 {
    let n = Normal::new(mean, sd).expect("validated");
    n.cdf(1.0) - n.cdf(0.0)
}

/// Bisection inversion of a strictly increasing CDF on `[0, 1]`.
fn invert_monotone_cdf(cdf: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
