//! Prior ingredients of the argmax posterior: the pseudo-observation `y0`, its
//! precision `K0`, and the scalars `rho` and `xi`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type DynPointFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A user-supplied function of a point.
#[derive(Clone)]
pub struct PointFn(Arc<DynPointFn>);

impl PointFn {
    pub fn new(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn call(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for PointFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PointFn(..)")
    }
}

/// A coordinate given either as one scalar broadcast to every axis or as a full vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Center {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Center {
    fn squared_distance(&self, x: &[f64]) -> f64 {
        match self {
            Center::Scalar(c) => x.iter().map(|xi| (xi - c) * (xi - c)).sum(),
            Center::Vector(c) => {
                debug_assert_eq!(c.len(), x.len());
                crate::kernel::squared_distance(x, c)
            }
        }
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Center::Scalar(_) => Ok(()),
            Center::Vector(c) => crate::error::check_dim(dim, c.len()),
        }
    }
}

/// Prior estimate `y0` of the mean function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorMean {
    Constant(f64),
    /// Log of an isotropic Gaussian without its normalizer: `-|x - mu0|^2 / (2 var0)`.
    LogGaussian { mu0: Center, var0: f64 },
    /// `-scale * |x - center|^2`.
    Quadratic { scale: f64, center: Center },
    #[serde(skip)]
    Custom(PointFn),
}

impl PriorMean {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            PriorMean::Constant(c) => *c,
            PriorMean::LogGaussian { mu0, var0 } => -mu0.squared_distance(x) / (2.0 * var0),
            PriorMean::Quadratic { scale, center } => -scale * center.squared_distance(x),
            PriorMean::Custom(f) => f.call(x),
        }
    }

    pub fn custom(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        PriorMean::Custom(PointFn::new(f))
    }

    fn validate(&self, dim: Option<usize>) -> Result<()> {
        match self {
            PriorMean::LogGaussian { var0, .. } if !(*var0 > 0.0) => {
                Err(Error::invalid("y0.var0", format!("must be positive, got {var0}")))
            }
            PriorMean::Quadratic { scale, .. } if !scale.is_finite() => {
                Err(Error::invalid("y0.scale", "must be finite"))
            }
            PriorMean::LogGaussian { mu0: c, .. } | PriorMean::Quadratic { center: c, .. } => match dim {
                Some(d) => c.check_dim(d),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

/// Prior precision `K0` of the pseudo-observation; must be strictly positive.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorPrecision {
    Constant(f64),
    #[serde(skip)]
    Custom(PointFn),
}

impl PriorPrecision {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            PriorPrecision::Constant(c) => *c,
            PriorPrecision::Custom(f) => f.call(x),
        }
    }

    pub fn custom(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        PriorPrecision::Custom(PointFn::new(f))
    }
}

impl Default for PriorPrecision {
    fn default() -> Self {
        PriorPrecision::Constant(1.0)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorSpec {
    /// Precision gained per distinct observed location.
    pub rho: f64,
    /// Number of prior pseudo-locations.
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default)]
    pub k0: PriorPrecision,
    pub y0: PriorMean,
}

fn default_xi() -> f64 {
    1.0
}

impl PriorSpec {
    pub fn new(rho: f64, xi: f64, k0: PriorPrecision, y0: PriorMean) -> Result<Self> {
        let spec = Self { rho, xi, k0, y0 };
        spec.validate(None)?;
        Ok(spec)
    }

    /// Checks scalar parameters, and center dimensions when `dim` is known.
    pub fn validate(&self, dim: Option<usize>) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::invalid("rho", format!("must be positive, got {}", self.rho)));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::invalid("xi", format!("must be positive, got {}", self.xi)));
        }
        if let PriorPrecision::Constant(c) = self.k0 {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::invalid("k0", format!("must be positive, got {c}")));
            }
        }
        self.y0.validate(dim)
    }
}
