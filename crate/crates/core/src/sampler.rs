//! Random-walk Metropolis–Hastings over an unnormalized log-density.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::posterior::PosteriorState;

/// Target distribution known up to an additive constant in log space.
pub trait LogDensity {
    fn dim(&self) -> usize;

    /// Called with points of length [`dim`](Self::dim) only.
    fn log_density_at(&self, x: &[f64]) -> f64;
}

impl LogDensity for PosteriorState {
    fn dim(&self) -> usize {
        PosteriorState::dim(self)
    }

    fn log_density_at(&self, x: &[f64]) -> f64 {
        self.log_density_unchecked(x)
    }
}

impl<T: LogDensity + ?Sized> LogDensity for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn log_density_at(&self, x: &[f64]) -> f64 {
        (**self).log_density_at(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MhConfig {
    /// Per-coordinate variance of the isotropic Gaussian proposal.
    pub step_variance: f64,
    /// Steps run before a point is emitted by [`mh_sample`].
    pub burn_in_steps: usize,
    #[serde(default)]
    pub seed: u64,
}

impl MhConfig {
    pub fn new(step_variance: f64, burn_in_steps: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            step_variance,
            burn_in_steps,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_variance > 0.0 && self.step_variance.is_finite()) {
            return Err(Error::invalid(
                "step_variance",
                format!("must be positive, got {}", self.step_variance),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    current: Vec<f64>,
    current_log_density: f64,
    pub accepted: u64,
    pub proposed: u64,
    /// Proposals rejected because the target returned NaN or an infinity.
    pub non_finite: u64,
    scratch: Vec<f64>,
}

impl ChainState {
    pub fn new<T: LogDensity + ?Sized>(target: &T, start: &[f64]) -> Result<Self> {
        check_dim(target.dim(), start.len())?;
        Ok(Self {
            current: start.to_vec(),
            current_log_density: target.log_density_at(start),
            accepted: 0,
            proposed: 0,
            non_finite: 0,
            scratch: vec![0.0; start.len()],
        })
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }

    pub fn current_log_density(&self) -> f64 {
        self.current_log_density
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Re-evaluates the cached density after the target changed (e.g. a new observation).
    pub fn retarget<T: LogDensity + ?Sized>(&mut self, target: &T) -> Result<()> {
        check_dim(target.dim(), self.current.len())?;
        self.current_log_density = target.log_density_at(&self.current);
        Ok(())
    }
}

/// One Metropolis–Hastings transition. Returns whether the proposal was accepted.
pub fn mh_step<T, R>(chain: &mut ChainState, target: &T, config: &MhConfig, rng: &mut R) -> bool
where
    T: LogDensity + ?Sized,
    R: Rng + ?Sized,
{
    let sd = config.step_variance.sqrt();
    for (p, c) in chain.scratch.iter_mut().zip(&chain.current) {
        let z: f64 = rng.sample(StandardNormal);
        *p = c + sd * z;
    }
    let u: f64 = rng.random();
    chain.proposed += 1;

    let proposal_ld = target.log_density_at(&chain.scratch);
    if !proposal_ld.is_finite() {
        chain.non_finite += 1;
        return false;
    }
    let delta = proposal_ld - chain.current_log_density;
    // Symmetric proposal: the Hastings correction cancels.
    let accept = delta >= 0.0 || u < delta.exp();
    if accept {
        std::mem::swap(&mut chain.current, &mut chain.scratch);
        chain.current_log_density = proposal_ld;
        chain.accepted += 1;
    }
    accept
}

/// Runs `config.burn_in_steps` transitions on an existing chain and returns the final point.
pub fn advance<T, R>(chain: &mut ChainState, target: &T, config: &MhConfig, rng: &mut R) -> Vec<f64>
where
    T: LogDensity + ?Sized,
    R: Rng + ?Sized,
{
    for _ in 0..config.burn_in_steps {
        mh_step(chain, target, config, rng);
    }
    chain.current.clone()
}

/// Starts a fresh chain at `start`, runs `config.burn_in_steps` transitions and
/// returns where it ended.
pub fn mh_sample<T, R>(target: &T, start: &[f64], config: &MhConfig, rng: &mut R) -> Result<Vec<f64>>
where
    T: LogDensity + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    let mut chain = ChainState::new(target, start)?;
    Ok(advance(&mut chain, target, config, rng))
}
