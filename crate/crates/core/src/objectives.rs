//! Benchmark objectives with additive Gaussian observation noise.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Location of the maximum of [`trig1d`] on `[-1, 3]`.
///
/// Produced by `cargo run --example trig1d_optimum` (grid search over 10^6
/// points followed by bisection on the derivative).
pub const TRIG1D_ARGMAX: f64 = 0.548_996_096_091_397_5;
/// Value of [`trig1d`] at [`TRIG1D_ARGMAX`].
pub const TRIG1D_MAX: f64 = 1.878_706_850_119_895_1;

/// Search interval for the 1-D benchmark.
pub const TRIG1D_DOMAIN: (f64, f64) = (-1.0, 3.0);

/// `cos(2x + 3pi/2) + sin(6x + 3pi/2)`
pub fn trig1d(x: f64) -> f64 {
    (2.0 * x + 1.5 * PI).cos() + (6.0 * x + 1.5 * PI).sin()
}

pub fn trig1d_derivative(x: f64) -> f64 {
    -2.0 * (2.0 * x + 1.5 * PI).sin() + 6.0 * (6.0 * x + 1.5 * PI).cos()
}

/// Radial profile of the noisy ripples function at distance `r` from its center.
pub fn ripples_profile(r: f64) -> f64 {
    -r * r / 1000.0 + (2.0 / 3.0 * PI * r).cos()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Trig1d,
    /// Shallow quadratic bowl with a radial cosine, maximal at `mu`.
    NoisyRipples { mu: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObjectiveRepr", into = "ObjectiveRepr")]
pub struct Objective {
    family: Family,
    noise_variance: f64,
}

impl Objective {
    pub fn trig1d(noise_variance: f64) -> Result<Self> {
        Self::with_family(Family::Trig1d, noise_variance)
    }

    pub fn noisy_ripples(mu: Vec<f64>, noise_variance: f64) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::invalid("dimension", "must be at least 1"));
        }
        Self::with_family(Family::NoisyRipples { mu }, noise_variance)
    }

    fn with_family(family: Family, noise_variance: f64) -> Result<Self> {
        if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
            return Err(Error::invalid(
                "noise_variance",
                format!("must be non-negative, got {noise_variance}"),
            ));
        }
        Ok(Self { family, noise_variance })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Trig1d => "trig1d",
            Family::NoisyRipples { .. } => "noisy_ripples",
        }
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            Family::Trig1d => 1,
            Family::NoisyRipples { mu } => mu.len(),
        }
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Noiseless objective value.
    pub fn mean_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(match &self.family {
            Family::Trig1d => trig1d(x[0]),
            Family::NoisyRipples { mu } => ripples_profile(crate::kernel::squared_distance(x, mu).sqrt()),
        })
    }

    /// A noisy evaluation `mean_value(x) + N(0, noise_variance)`.
    pub fn observe<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<f64> {
        let mean = self.mean_value(x)?;
        if self.noise_variance == 0.0 {
            return Ok(mean);
        }
        let z: f64 = rng.sample(StandardNormal);
        Ok(mean + self.noise_variance.sqrt() * z)
    }

    /// Global maximizer and maximum of the noiseless objective.
    pub fn optimum(&self) -> (Vec<f64>, f64) {
        match &self.family {
            Family::Trig1d => (vec![TRIG1D_ARGMAX], TRIG1D_MAX),
            Family::NoisyRipples { mu } => (mu.clone(), 1.0),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ObjectiveRepr {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<Vec<f64>>,
    noise_variance: f64,
}

impl TryFrom<ObjectiveRepr> for Objective {
    type Error = Error;

    fn try_from(r: ObjectiveRepr) -> Result<Self> {
        match r.family.as_str() {
            "trig1d" => {
                if let Some(d) = r.dimension {
                    if d != 1 {
                        return Err(Error::Config(format!("trig1d is one-dimensional, got dimension {d}")));
                    }
                }
                Objective::trig1d(r.noise_variance)
            }
            "noisy_ripples" => {
                let mu = match (r.mu, r.dimension) {
                    (Some(mu), Some(d)) if mu.len() != d => {
                        return Err(Error::Config(format!(
                            "noisy_ripples: mu has {} coordinates but dimension is {d}",
                            mu.len()
                        )))
                    }
                    (Some(mu), _) => mu,
                    (None, Some(d)) => vec![0.0; d],
                    (None, None) => return Err(Error::Config("noisy_ripples needs `dimension` or `mu`".into())),
                };
                Objective::noisy_ripples(mu, r.noise_variance)
            }
            other => Err(Error::Config(format!("unknown objective family `{other}`"))),
        }
    }
}

impl From<Objective> for ObjectiveRepr {
    fn from(o: Objective) -> Self {
        let dimension = Some(o.dim());
        let (family, mu) = match o.family {
            Family::Trig1d => ("trig1d", None),
            Family::NoisyRipples { mu } => ("noisy_ripples", Some(mu)),
        };
        ObjectiveRepr {
            family: family.to_string(),
            dimension,
            mu,
            noise_variance: o.noise_variance,
        }
    }
}
