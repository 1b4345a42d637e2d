use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gp::GpConfig;
use crate::kernel::KernelSpec;
use crate::objectives::{Family, Objective, TRIG1D_DOMAIN};
use crate::posterior::linspace;
use crate::prior::{Center, PriorMean, PriorPrecision, PriorSpec};
use crate::sampler::MhConfig;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    #[default]
    ArgmaxThompson,
    GpUcb,
    /// Uniform sampling in a box; a sanity floor, not part of the method.
    RandomSearch,
}

impl OptimizerKind {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::ArgmaxThompson => "argmax_thompson",
            OptimizerKind::GpUcb => "gp_ucb",
            OptimizerKind::RandomSearch => "random_search",
        }
    }
}

/// Argmax-prior model parameters. Unset fields take the defaults of the objective family.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<PriorPrecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<PriorMean>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    /// Start every test location's chain from `start` instead of the previous test location.
    #[serde(default)]
    pub restart_chain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    /// Tensor-product lattice in `dim` dimensions.
    pub fn build(&self, dim: usize) -> Result<Vec<Vec<f64>>> {
        if self.points == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(self.min < self.max) && self.points > 1 {
            return Err(Error::Config(format!("grid min {} must be below max {}", self.min, self.max)));
        }
        let total = (self.points as f64).powi(dim as i32);
        if total > 1e6 {
            return Err(Error::Config(format!(
                "a {}-point lattice in {dim} dimensions has {total:e} nodes; pass explicit candidates instead",
                self.points
            )));
        }
        let axis: Vec<f64> = linspace(self.min, self.max, self.points).into_iter().map(|p| p[0]).collect();
        let mut grid = vec![Vec::with_capacity(dim)];
        for _ in 0..dim {
            grid = grid
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpSettings {
    #[serde(default = "default_gp_noise_std")]
    pub noise_std: f64,
    #[serde(default = "default_gp_length_scale")]
    pub length_scale: f64,
    #[serde(default = "default_gp_delta")]
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<Vec<f64>>>,
}

fn default_gp_noise_std() -> f64 {
    0.3
}

fn default_gp_length_scale() -> f64 {
    0.3
}

fn default_gp_delta() -> f64 {
    0.5
}

impl Default for GpSettings {
    fn default() -> Self {
        Self {
            noise_std: default_gp_noise_std(),
            length_scale: default_gp_length_scale(),
            delta: default_gp_delta(),
            grid: None,
            candidates: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBox {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub objective: Objective,
    #[serde(default)]
    pub optimizer: OptimizerKind,
    #[serde(default)]
    pub model: ModelSettings,
    #[serde(default)]
    pub mh: ChainSettings,
    #[serde(default)]
    pub gp: GpSettings,
    #[serde(default)]
    pub search: SearchBox,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_steps() -> usize {
    200
}

fn default_runs() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(objective: Objective, optimizer: OptimizerKind, steps: usize, runs: usize) -> Self {
        Self {
            objective,
            optimizer,
            model: ModelSettings::default(),
            mh: ChainSettings::default(),
            gp: GpSettings::default(),
            search: SearchBox::default(),
            steps,
            runs,
            base_seed: 0,
            output: None,
        }
    }

    /// 1-D trigonometric benchmark with unit noise variance, 10 runs of 200 steps.
    pub fn trig1d_comparison(optimizer: OptimizerKind) -> Self {
        let obj = Objective::trig1d(1.0).expect("valid noise variance");
        Self::new(obj, optimizer, 200, 10)
    }

    /// The 50-dimensional noisy ripples run: 1000 observations, one run.
    pub fn ripples50() -> Self {
        let obj = Objective::noisy_ripples(vec![0.0; 50], 0.1).expect("valid ripples objective");
        Self::new(obj, OptimizerKind::ArgmaxThompson, 1000, 1)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::invalid("steps", "must be at least 1"));
        }
        if self.runs == 0 {
            return Err(Error::invalid("runs", "must be at least 1"));
        }
        match self.optimizer {
            OptimizerKind::ArgmaxThompson => {
                self.prior()?;
                self.mh_config()?;
                let start = self.chain_start();
                crate::error::check_dim(self.objective.dim(), start.len())?;
            }
            OptimizerKind::GpUcb => {
                self.gp_config()?;
            }
            OptimizerKind::RandomSearch => {
                let (lo, hi) = self.search_box();
                if !(lo < hi) {
                    return Err(Error::Config(format!("search box [{lo}, {hi}] is empty")));
                }
            }
        }
        Ok(())
    }

    fn is_trig(&self) -> bool {
        matches!(self.objective.family(), Family::Trig1d)
    }

    pub fn prior(&self) -> Result<PriorSpec> {
        let m = &self.model;
        let (rho, y0) = if self.is_trig() {
            (
                0.3,
                PriorMean::LogGaussian {
                    mu0: Center::Scalar(1.5),
                    var0: 5.0,
                },
            )
        } else {
            (
                1.5,
                PriorMean::Quadratic {
                    scale: 2.0 / 1000.0,
                    center: Center::Scalar(-5.0),
                },
            )
        };
        let spec = PriorSpec::new(
            m.rho.unwrap_or(rho),
            m.xi.unwrap_or(1.0),
            m.k0.clone().unwrap_or_default(),
            m.y0.clone().unwrap_or(y0),
        )?;
        spec.validate(Some(self.objective.dim()))?;
        Ok(spec)
    }

    pub fn kernel(&self) -> Result<KernelSpec> {
        match self.model.kernel {
            Some(k) => Ok(k),
            None if self.is_trig() => KernelSpec::gaussian_from_variance(0.05),
            None => KernelSpec::gaussian(2.0),
        }
    }

    pub fn mh_config(&self) -> Result<MhConfig> {
        MhConfig::new(
            self.mh.step_variance.unwrap_or(0.07),
            self.mh.burn_in_steps.unwrap_or(120),
            self.base_seed,
        )
    }

    pub fn chain_start(&self) -> Vec<f64> {
        match (&self.mh.start, self.objective.family()) {
            (Some(s), _) => s.clone(),
            (None, Family::Trig1d) => vec![1.5],
            (None, Family::NoisyRipples { mu }) => vec![20.0; mu.len()],
        }
    }

    pub fn gp_config(&self) -> Result<GpConfig> {
        let g = &self.gp;
        let candidates = match (&g.candidates, &g.grid) {
            (Some(c), _) => c.clone(),
            (None, Some(grid)) => grid.build(self.objective.dim())?,
            (None, None) if self.is_trig() => GridSpec {
                min: TRIG1D_DOMAIN.0,
                max: TRIG1D_DOMAIN.1,
                points: 1000,
            }
            .build(1)?,
            (None, None) => {
                return Err(Error::Config(
                    "gp_ucb on this objective needs `gp.grid` or `gp.candidates`".into(),
                ))
            }
        };
        for c in &candidates {
            crate::error::check_dim(self.objective.dim(), c.len())?;
        }
        GpConfig::new(g.noise_std, g.length_scale, g.delta, candidates)
    }

    pub fn search_box(&self) -> (f64, f64) {
        let (lo, hi) = if self.is_trig() { TRIG1D_DOMAIN } else { (-25.0, 25.0) };
        (self.search.min.unwrap_or(lo), self.search.max.unwrap_or(hi))
    }

    /// Copy with every family default written out, as echoed next to the results.
    pub fn resolved(&self) -> Result<Self> {
        let mut c = self.clone();
        match self.optimizer {
            OptimizerKind::ArgmaxThompson => {
                let prior = self.prior()?;
                c.model = ModelSettings {
                    rho: Some(prior.rho),
                    xi: Some(prior.xi),
                    kernel: Some(self.kernel()?),
                    k0: Some(prior.k0),
                    y0: Some(prior.y0),
                };
                let mh = self.mh_config()?;
                c.mh.step_variance = Some(mh.step_variance);
                c.mh.burn_in_steps = Some(mh.burn_in_steps);
                c.mh.start = Some(self.chain_start());
            }
            OptimizerKind::GpUcb => {
                if c.gp.grid.is_none() && c.gp.candidates.is_none() && self.is_trig() {
                    c.gp.grid = Some(GridSpec {
                        min: TRIG1D_DOMAIN.0,
                        max: TRIG1D_DOMAIN.1,
                        points: 1000,
                    });
                }
            }
            OptimizerKind::RandomSearch => {
                let (lo, hi) = self.search_box();
                c.search = SearchBox {
                    min: Some(lo),
                    max: Some(hi),
                };
            }
        }
        Ok(c)
    }
}
