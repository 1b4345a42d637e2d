//! Gaussian-process regression and the GP-UCB acquisition rule.
//!
//! The GP has zero prior mean, unit signal variance and a squared-exponential
//! kernel. The UCB maximization is done exhaustively over a finite candidate
//! set, which is also the `|D|` entering the `beta_t` schedule.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{check_dim, Error, Result};
use crate::kernel::squared_distance;

const JITTER: f64 = 1e-9;
const NEGATIVE_VARIANCE_TOLERANCE: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpConfig {
    pub noise_std: f64,
    pub length_scale: f64,
    pub delta: f64,
    pub candidate_grid: Vec<Vec<f64>>,
}

impl GpConfig {
    pub fn new(noise_std: f64, length_scale: f64, delta: f64, candidate_grid: Vec<Vec<f64>>) -> Result<Self> {
        let cfg = Self {
            noise_std,
            length_scale,
            delta,
            candidate_grid,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_std > 0.0) {
            return Err(Error::invalid("noise_std", format!("must be positive, got {}", self.noise_std)));
        }
        if !(self.length_scale > 0.0) {
            return Err(Error::invalid(
                "length_scale",
                format!("must be positive, got {}", self.length_scale),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid("delta", format!("must lie in (0, 1), got {}", self.delta)));
        }
        if self.candidate_grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let d = self.candidate_grid[0].len();
        for c in &self.candidate_grid {
            check_dim(d, c.len())?;
        }
        Ok(())
    }

    fn kernel(&self, a: &[f64], b: &[f64]) -> f64 {
        (-squared_distance(a, b) / (2.0 * self.length_scale * self.length_scale)).exp()
    }

    /// Exploration weight `2 log(|D| t^2 pi^2 / (6 delta))`.
    pub fn beta_t(&self, t: usize) -> f64 {
        beta_t(self.candidate_grid.len(), t, self.delta)
    }
}

/// `2 log(card * t^2 * pi^2 / (6 delta))` for a decision set of size `card`.
pub fn beta_t(card: usize, t: usize, delta: f64) -> f64 {
    debug_assert!(t >= 1);
    let t = t as f64;
    2.0 * (card as f64 * t * t * PI * PI / (6.0 * delta)).ln()
}

#[derive(Debug)]
pub struct GpPosterior {
    config: GpConfig,
    inputs: Dataset,
    chol: Option<Cholesky<f64, Dyn>>,
    alpha: DVector<f64>,
    /// Jitter added to the diagonal on top of the noise variance, if the first factorization failed.
    pub jitter: f64,
    clamped: AtomicU64,
}

impl GpPosterior {
    /// Fits the GP to `dataset`. An empty dataset gives the prior.
    pub fn fit(config: &GpConfig, dataset: &Dataset) -> Result<Self> {
        config.validate()?;
        check_dim(config.candidate_grid[0].len(), dataset.dim())?;
        let n = dataset.len();
        if n == 0 {
            return Ok(Self {
                config: config.clone(),
                inputs: dataset.clone(),
                chol: None,
                alpha: DVector::zeros(0),
                jitter: 0.0,
                clamped: AtomicU64::new(0),
            });
        }
        let noise_var = config.noise_std * config.noise_std;
        let cov = DMatrix::from_fn(n, n, |i, j| {
            let k = config.kernel(dataset.point(i), dataset.point(j));
            if i == j {
                k + noise_var
            } else {
                k
            }
        });
        let (chol, jitter) = match Cholesky::new(cov.clone()) {
            Some(c) => (c, 0.0),
            None => {
                let mut jittered = cov;
                for i in 0..n {
                    jittered[(i, i)] += JITTER;
                }
                let c = Cholesky::new(jittered).ok_or(Error::Factorization { size: n, jitter: JITTER })?;
                (c, JITTER)
            }
        };
        let y = DVector::from_column_slice(dataset.values());
        let alpha = chol.solve(&y);
        Ok(Self {
            config: config.clone(),
            inputs: dataset.clone(),
            chol: Some(chol),
            alpha,
            jitter,
            clamped: AtomicU64::new(0),
        })
    }

    pub fn config(&self) -> &GpConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Lower-triangular factor of `K + noise^2 I` (plus any jitter).
    pub fn factor(&self) -> Option<DMatrix<f64>> {
        self.chol.as_ref().map(|c| c.l())
    }

    /// Number of predictions whose variance came out negative and was clamped to zero.
    pub fn clamped_variances(&self) -> u64 {
        self.clamped.load(Ordering::Relaxed)
    }

    /// Predictive mean and variance of the latent function at `x`.
    pub fn predict(&self, x: &[f64]) -> Result<(f64, f64)> {
        check_dim(self.inputs.dim(), x.len())?;
        let Some(chol) = &self.chol else {
            return Ok((0.0, 1.0));
        };
        let kstar = DVector::from_iterator(self.len(), self.inputs.points().map(|p| self.config.kernel(p, x)));
        let mean = kstar.dot(&self.alpha);
        let v = chol
            .l_dirty()
            .solve_lower_triangular(&kstar)
            .expect("cholesky factor has a positive diagonal");
        Ok((mean, self.clamp_variance(1.0 - v.norm_squared())))
    }

    /// Predictions at every candidate point, batched through one triangular solve.
    pub fn predict_candidates(&self) -> Vec<(f64, f64)> {
        let grid = &self.config.candidate_grid;
        let Some(chol) = &self.chol else {
            return vec![(0.0, 1.0); grid.len()];
        };
        let n = self.len();
        let mut kstar = DMatrix::from_fn(n, grid.len(), |i, j| self.config.kernel(self.inputs.point(i), &grid[j]));
        let means = kstar.tr_mul(&self.alpha);
        chol.l_dirty().solve_lower_triangular_mut(&mut kstar);
        kstar
            .column_iter()
            .zip(means.iter())
            .map(|(v, &m)| (m, self.clamp_variance(1.0 - v.norm_squared())))
            .collect()
    }

    fn clamp_variance(&self, var: f64) -> f64 {
        if var >= 0.0 {
            return var;
        }
        if var < NEGATIVE_VARIANCE_TOLERANCE {
            log_negative_variance(var);
        }
        self.clamped.fetch_add(1, Ordering::Relaxed);
        0.0
    }

    /// Index and location of the candidate maximizing `mean + sqrt(beta_t) * sd`.
    /// Ties go to the lowest index.
    pub fn ucb_select(&self, t: usize) -> (usize, &[f64]) {
        let scale = self.config.beta_t(t.max(1)).sqrt();
        let mut best = (0, f64::NEG_INFINITY);
        for (i, (m, v)) in self.predict_candidates().into_iter().enumerate() {
            let u = m + scale * v.sqrt();
            if u > best.1 {
                best = (i, u);
            }
        }
        (best.0, &self.config.candidate_grid[best.0])
    }
}

#[cold]
fn log_negative_variance(var: f64) {
    eprintln!("warning: gp predictive variance {var:e} clamped to zero");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posterior::linspace;

    fn cfg(grid: Vec<Vec<f64>>) -> GpConfig {
        GpConfig::new(0.3, 0.3, 0.5, grid).unwrap()
    }

    #[test]
    fn prior_gp() {
        let c = cfg(linspace(-1.0, 3.0, 11));
        let gp = GpPosterior::fit(&c, &Dataset::new(1).unwrap()).unwrap();
        for x in [-1.0, 0.3, 2.9] {
            assert_eq!(gp.predict(&[x]).unwrap(), (0.0, 1.0));
        }
        assert_eq!(gp.ucb_select(1).0, 0);
    }

    #[test]
    fn single_observation_closed_form() {
        let c = cfg(linspace(-1.0, 3.0, 11));
        let ds = Dataset::from_pairs(1, [([0.7], 2.0)]).unwrap();
        let gp = GpPosterior::fit(&c, &ds).unwrap();
        let (m, v) = gp.predict(&[0.7]).unwrap();
        let s2 = 0.09;
        assert!((m - 2.0 / (1.0 + s2)).abs() < 1e-14);
        assert!((v - (1.0 - 1.0 / (1.0 + s2))).abs() < 1e-14);
    }

    #[test]
    fn batched_matches_pointwise() {
        let c = cfg(linspace(-1.0, 3.0, 37));
        let ds = Dataset::from_pairs(1, [([0.1], 1.0), ([0.5], -0.2), ([2.2], 0.4)]).unwrap();
        let gp = GpPosterior::fit(&c, &ds).unwrap();
        for (p, (m, v)) in c.candidate_grid.iter().zip(gp.predict_candidates()) {
            let (m2, v2) = gp.predict(p).unwrap();
            assert!((m - m2).abs() < 1e-13 && (v - v2).abs() < 1e-13);
        }
    }

    #[test]
    fn beta_values() {
        // |D| = 1, t = 1 and delta = pi^2 / (6e) make the log argument e.
        let delta = PI * PI / (6.0 * std::f64::consts::E);
        assert!((beta_t(1, 1, delta) - 2.0).abs() < 1e-15);
        // 2 ln(100 pi^2 / 3) = 11.5920353380375640...
        assert!((beta_t(100, 1, 0.5) - 11.592_035_338_037_564).abs() < 1e-12);
        for t in 1..100 {
            assert!(beta_t(1000, t + 1, 0.5) > beta_t(1000, t, 0.5));
        }
    }

    #[test]
    fn single_candidate_is_selected() {
        let c = cfg(vec![vec![0.25]]);
        let ds = Dataset::from_pairs(1, [([0.0], 1.0)]).unwrap();
        let gp = GpPosterior::fit(&c, &ds).unwrap();
        assert_eq!(gp.ucb_select(3), (0, &[0.25][..]));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(GpConfig::new(0.0, 0.3, 0.5, vec![vec![0.0]]).is_err());
        assert!(GpConfig::new(0.3, 0.3, 1.0, vec![vec![0.0]]).is_err());
        assert!(GpConfig::new(0.3, 0.3, 0.5, vec![]).is_err());
        assert!(GpConfig::new(0.3, -1.0, 0.5, vec![vec![0.0]]).is_err());
    }
}
