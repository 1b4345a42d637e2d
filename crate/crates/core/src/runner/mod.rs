//! Optimization loops and experiment orchestration.
//!
//! A run draws test points from one optimizer, observes the objective with
//! independent noise, and records the running average of observations and the
//! regret. Runs inside an experiment use seeds `base_seed + k` and may execute
//! in parallel; each run is sequential and fully determined by its seed.

mod config;
pub mod density;
pub mod output;
pub mod plot;
mod trace;

use std::path::Path;

use rand::Rng;

pub use config::{ChainSettings, ExperimentConfig, GpSettings, GridSpec, ModelSettings, OptimizerKind, SearchBox};
pub use output::{emit_outputs, read_run_csv, write_run_csv};
pub use trace::{aggregate, RunTrace, StepRecord, Summary, SummaryRow};

use crate::dataset::Dataset;
use crate::error::{check_dim, Result};
use crate::gp::{GpConfig, GpPosterior};
use crate::objectives::Objective;
use crate::posterior::PosteriorState;
use crate::rng::{stream, SimRng, Stream};
use crate::sampler::{advance, ChainState, MhConfig};

/// Proposes test points and absorbs their observations.
pub trait Optimizer {
    /// Next test location for 1-based step `t`.
    fn propose(&mut self, t: usize, rng: &mut SimRng) -> Result<Vec<f64>>;

    fn tell(&mut self, x: &[f64], y: f64) -> Result<()>;
}

/// Thompson sampling from the argmax posterior via Metropolis–Hastings.
pub struct ArgmaxThompson {
    posterior: PosteriorState,
    chain: ChainState,
    mh: MhConfig,
    start: Vec<f64>,
    restart_chain: bool,
}

impl ArgmaxThompson {
    pub fn new(posterior: PosteriorState, mh: MhConfig, start: Vec<f64>, restart_chain: bool) -> Result<Self> {
        mh.validate()?;
        let chain = ChainState::new(&posterior, &start)?;
        Ok(Self {
            posterior,
            chain,
            mh,
            start,
            restart_chain,
        })
    }

    pub fn posterior(&self) -> &PosteriorState {
        &self.posterior
    }

    pub fn chain(&self) -> &ChainState {
        &self.chain
    }
}

impl Optimizer for ArgmaxThompson {
    fn propose(&mut self, _t: usize, rng: &mut SimRng) -> Result<Vec<f64>> {
        if self.restart_chain {
            self.chain = ChainState::new(&self.posterior, &self.start)?;
        }
        Ok(advance(&mut self.chain, &self.posterior, &self.mh, rng))
    }

    fn tell(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.posterior.observe(x, y)?;
        // Gramian sums stay fixed between observations; only the cached chain density moves.
        self.chain.retarget(&self.posterior)
    }
}

/// One Thompson-sampling step: sample a test point from the posterior over the
/// maximizer, observe it, and return the updated posterior with the pair.
pub fn thompson_step(
    posterior: &PosteriorState,
    chain: &mut ChainState,
    objective: &Objective,
    mh: &MhConfig,
    chain_rng: &mut SimRng,
    noise_rng: &mut SimRng,
) -> Result<(PosteriorState, Vec<f64>, f64)> {
    check_dim(posterior.dim(), objective.dim())?;
    let x = advance(chain, posterior, mh, chain_rng);
    let y = objective.observe(&x, noise_rng)?;
    let next = posterior.update(&x, y)?;
    chain.retarget(&next)?;
    Ok((next, x, y))
}

/// GP-UCB over a finite candidate set, refitting on all data every step.
pub struct GpUcb {
    config: GpConfig,
    data: Dataset,
}

impl GpUcb {
    pub fn new(config: GpConfig, dim: usize) -> Result<Self> {
        config.validate()?;
        check_dim(dim, config.candidate_grid[0].len())?;
        Ok(Self {
            config,
            data: Dataset::new(dim)?,
        })
    }
}

impl Optimizer for GpUcb {
    fn propose(&mut self, t: usize, _rng: &mut SimRng) -> Result<Vec<f64>> {
        let gp = GpPosterior::fit(&self.config, &self.data)?;
        Ok(gp.ucb_select(t).1.to_vec())
    }

    fn tell(&mut self, x: &[f64], y: f64) -> Result<()> {
        self.data.push(x, y)
    }
}

/// Uniform sampling in an axis-aligned cube.
pub struct RandomSearch {
    dim: usize,
    min: f64,
    max: f64,
}

impl RandomSearch {
    pub fn new(dim: usize, min: f64, max: f64) -> Self {
        Self { dim, min, max }
    }
}

impl Optimizer for RandomSearch {
    fn propose(&mut self, _t: usize, rng: &mut SimRng) -> Result<Vec<f64>> {
        Ok((0..self.dim).map(|_| rng.random_range(self.min..self.max)).collect())
    }

    fn tell(&mut self, _x: &[f64], _y: f64) -> Result<()> {
        Ok(())
    }
}

pub fn build_optimizer(config: &ExperimentConfig) -> Result<Box<dyn Optimizer>> {
    let dim = config.objective.dim();
    Ok(match config.optimizer {
        OptimizerKind::ArgmaxThompson => {
            let posterior = PosteriorState::new(config.prior()?, config.kernel()?, dim)?;
            Box::new(ArgmaxThompson::new(
                posterior,
                config.mh_config()?,
                config.chain_start(),
                config.mh.restart_chain,
            )?)
        }
        OptimizerKind::GpUcb => Box::new(GpUcb::new(config.gp_config()?, dim)?),
        OptimizerKind::RandomSearch => {
            let (lo, hi) = config.search_box();
            Box::new(RandomSearch::new(dim, lo, hi))
        }
    })
}

/// Executes one run with the given seed.
pub fn run_single(config: &ExperimentConfig, seed: u64) -> Result<RunTrace> {
    let mut optimizer = build_optimizer(config)?;
    let objective = &config.objective;
    let optimum = objective.optimum().1;
    let proposal_stream = match config.optimizer {
        OptimizerKind::RandomSearch => Stream::Search,
        _ => Stream::Chain,
    };
    let mut proposal_rng = stream(seed, proposal_stream);
    let mut noise_rng = stream(seed, Stream::Observation);

    let mut trace = RunTrace::new(seed);
    for t in 1..=config.steps {
        let started = Stopwatch::start();
        let x = optimizer.propose(t, &mut proposal_rng)?;
        let y = objective.observe(&x, &mut noise_rng)?;
        optimizer.tell(&x, y)?;
        let mean = objective.mean_value(&x)?;
        trace.push(x, y, mean, optimum, started.elapsed());
    }
    Ok(trace)
}

// `Instant::now` panics on wasm32 without an OS, so step timing reads zero there.
#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
struct Stopwatch(std::time::Instant);
#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
struct Stopwatch;

impl Stopwatch {
    #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
    fn start() -> Self {
        Self(std::time::Instant::now())
    }
    #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
    fn elapsed(&self) -> std::time::Duration {
        self.0.elapsed()
    }
    #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
    fn start() -> Self {
        Self
    }
    #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
    fn elapsed(&self) -> std::time::Duration {
        std::time::Duration::ZERO
    }
}

fn run_seeds(config: &ExperimentConfig) -> Vec<u64> {
    (0..config.runs as u64).map(|k| config.base_seed.wrapping_add(k)).collect()
}

#[cfg(feature = "parallel")]
fn execute_runs(config: &ExperimentConfig) -> Vec<Result<RunTrace>> {
    use rayon::prelude::*;
    run_seeds(config).into_par_iter().map(|s| run_single(config, s)).collect()
}

#[cfg(not(feature = "parallel"))]
fn execute_runs(config: &ExperimentConfig) -> Vec<Result<RunTrace>> {
    run_seeds(config).into_iter().map(|s| run_single(config, s)).collect()
}

/// Runs every seed of the experiment and, when `config.output` is set, writes
/// the result files there.
///
/// If any run fails, the runs that completed are still written before the
/// first error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunTrace>> {
    config.validate()?;
    let results = execute_runs(config);
    let mut traces = Vec::with_capacity(results.len());
    let mut first_err = None;
    for r in results {
        match r {
            Ok(t) => traces.push(t),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if let Some(err) = first_err {
        if let Some(dir) = &config.output {
            for (k, t) in traces.iter().enumerate() {
                output::write_run_csv(&dir.join(output::run_file_name(k)), t, config.objective.dim())?;
            }
        }
        return Err(err);
    }
    if let Some(dir) = &config.output {
        let summary = aggregate(&traces)?;
        emit_outputs(dir, &traces, &summary, config)?;
    }
    Ok(traces)
}

/// Traces of both methods on the same objective and seeds.
pub struct Comparison {
    pub argmax: Vec<RunTrace>,
    pub gp_ucb: Vec<RunTrace>,
}

/// Runs the argmax-prior sampler and GP-UCB with one shared configuration.
/// Outputs go to `<output>/argmax_thompson`, `<output>/gp_ucb` and a joint summary in `<output>`.
pub fn compare(config: &ExperimentConfig) -> Result<Comparison> {
    let variant = |kind: OptimizerKind| {
        let mut c = config.clone();
        c.optimizer = kind;
        c.output = config.output.as_ref().map(|d| d.join(kind.name()));
        c
    };
    let argmax_cfg = variant(OptimizerKind::ArgmaxThompson);
    let gp_cfg = variant(OptimizerKind::GpUcb);
    argmax_cfg.validate()?;
    gp_cfg.validate()?;
    let argmax = run_experiment(&argmax_cfg)?;
    let gp_ucb = run_experiment(&gp_cfg)?;
    if let Some(dir) = &config.output {
        output::emit_comparison(dir, &aggregate(&argmax)?, &aggregate(&gp_ucb)?)?;
    }
    Ok(Comparison { argmax, gp_ucb })
}

/// First 1-based step at which `curve` reaches `fraction` of its final value.
pub fn steps_to_fraction(curve: &[f64], fraction: f64) -> Option<usize> {
    let target = fraction * curve.last()?;
    curve.iter().position(|&v| v >= target).map(|i| i + 1)
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| crate::error::Error::io(dir, e))
}
