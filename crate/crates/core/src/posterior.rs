//! Posterior over the location of the maximizer.
//!
//! The unnormalized log-density at a candidate `x*` is
//!
//! ```text
//! rho * (xi + t * tr(G) / sum(G)) * (sum_i K(x_i, x*) y_i + K0(x*) y0(x*)) / (sum_i K(x_i, x*) + K0(x*))
//! ```
//!
//! i.e. a precision that grows with the number of distinct locations tested,
//! times a kernel-regression estimate of the mean function that falls back to
//! the prior estimate `y0` away from the data. Sequential updates telescope
//! to this same closed form, so [`PosteriorState::update`] and a batch build
//! from the full dataset are interchangeable.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{check_dim, Error, Result};
use crate::kernel::{GramianStats, KernelSpec};
use crate::prior::PriorSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PosteriorRepr", into = "PosteriorRepr")]
pub struct PosteriorState {
    dataset: Dataset,
    gramian: GramianStats,
    prior: PriorSpec,
    kernel: KernelSpec,
}

impl PosteriorState {
    /// The prior-only state for a `dim`-dimensional domain.
    pub fn new(prior: PriorSpec, kernel: KernelSpec, dim: usize) -> Result<Self> {
        prior.validate(Some(dim))?;
        Ok(Self {
            dataset: Dataset::new(dim)?,
            gramian: GramianStats::empty(),
            prior,
            kernel,
        })
    }

    /// Builds the state for a whole dataset at once, computing the Gramian sums in `O(t^2)`.
    pub fn from_dataset(prior: PriorSpec, kernel: KernelSpec, dataset: Dataset) -> Result<Self> {
        prior.validate(Some(dataset.dim()))?;
        let gramian = GramianStats::from_dataset(&dataset, &kernel);
        Ok(Self {
            dataset,
            gramian,
            prior,
            kernel,
        })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn gramian(&self) -> &GramianStats {
        &self.gramian
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.dataset.dim()
    }

    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    /// Returns the state with `(x, y)` appended.
    pub fn update(&self, x: &[f64], y: f64) -> Result<Self> {
        let mut next = self.clone();
        next.observe(x, y)?;
        Ok(next)
    }

    /// In-place form of [`update`](Self::update).
    pub fn observe(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.gramian = self.gramian.update(&self.dataset, &self.kernel, x)?;
        self.dataset.push(x, y)
    }

    /// Kernel-regression estimate of the mean function at `x_star`.
    pub fn mean_estimate(&self, x_star: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x_star.len())?;
        Ok(self.mean_estimate_unchecked(x_star))
    }

    fn mean_estimate_unchecked(&self, x_star: &[f64]) -> f64 {
        let y0 = self.prior.y0.eval(x_star);
        if self.dataset.is_empty() {
            return y0;
        }
        let k0 = self.prior.k0.eval(x_star);
        let (mut num, mut den) = (k0 * y0, k0);
        for (xi, yi) in self.dataset.iter() {
            let k = self.kernel.eval_unchecked(xi, x_star);
            num += k * yi;
            den += k;
        }
        num / den
    }

    /// Precision `rho * (xi + effective locations)`.
    pub fn precision(&self) -> f64 {
        self.prior.rho * (self.prior.xi + self.gramian.effective_locations())
    }

    /// Unnormalized log-posterior of `x_star` being the maximizer.
    pub fn log_density(&self, x_star: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x_star.len())?;
        Ok(self.log_density_unchecked(x_star))
    }

    pub(crate) fn log_density_unchecked(&self, x_star: &[f64]) -> f64 {
        self.precision() * self.mean_estimate_unchecked(x_star)
    }

    /// Log-densities at every grid point.
    pub fn log_density_grid<P: AsRef<[f64]> + Sync>(&self, grid: &[P]) -> Result<Vec<f64>> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for p in grid {
            check_dim(self.dim(), p.as_ref().len())?;
        }
        Ok(map_grid(grid, |p| self.log_density_unchecked(p)))
    }

    /// Posterior weights on a finite grid, normalized to sum to one.
    pub fn density_grid<P: AsRef<[f64]> + Sync>(&self, grid: &[P]) -> Result<Vec<f64>> {
        Ok(normalize_log_weights(&self.log_density_grid(grid)?))
    }
}

/// `exp(l - max l)` renormalized to sum to one.
pub fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    w
}

#[cfg(feature = "parallel")]
fn map_grid<P: AsRef<[f64]> + Sync>(grid: &[P], f: impl Fn(&[f64]) -> f64 + Sync) -> Vec<f64> {
    use rayon::prelude::*;
    grid.par_iter().map(|p| f(p.as_ref())).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid<P: AsRef<[f64]>>(grid: &[P], f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    grid.iter().map(|p| f(p.as_ref())).collect()
}

/// Evenly spaced 1-D grid on `[min, max]` with `points` nodes.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<Vec<f64>> {
    match points {
        0 => Vec::new(),
        1 => vec![vec![min]],
        n => {
            let step = (max - min) / (n - 1) as f64;
            (0..n).map(|i| vec![min + step * i as f64]).collect()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PosteriorRepr {
    prior: PriorSpec,
    kernel: KernelSpec,
    dataset: Dataset,
}

impl From<PosteriorState> for PosteriorRepr {
    fn from(s: PosteriorState) -> Self {
        PosteriorRepr {
            prior: s.prior,
            kernel: s.kernel,
            dataset: s.dataset,
        }
    }
}

impl TryFrom<PosteriorRepr> for PosteriorState {
    type Error = Error;

    fn try_from(r: PosteriorRepr) -> Result<Self> {
        PosteriorState::from_dataset(r.prior, r.kernel, r.dataset)
    }
}
