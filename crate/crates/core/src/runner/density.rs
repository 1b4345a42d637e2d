//! Normalized posterior over the maximizer on a 1-D grid, for plotting how
//! `rho` and the kernel width shape it.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::output::{write_json, write_text};
use super::plot::{LinePlot, Series};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::objectives::{Objective, TRIG1D_DOMAIN};
use crate::posterior::{linspace, PosteriorState};
use crate::prior::{Center, PriorMean, PriorPrecision, PriorSpec};
use crate::rng::{stream, Stream};

/// Draws `count` inputs uniformly on `[min, max]` and observes the objective at each.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    #[serde(default = "default_sample_objective")]
    pub objective: Objective,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_min")]
    pub min: f64,
    #[serde(default = "default_max")]
    pub max: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_sample_objective() -> Objective {
    Objective::trig1d(0.3).expect("valid noise variance")
}

fn default_count() -> usize {
    7
}

fn default_min() -> f64 {
    TRIG1D_DOMAIN.0
}

fn default_max() -> f64 {
    TRIG1D_DOMAIN.1
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            objective: default_sample_objective(),
            count: default_count(),
            min: default_min(),
            max: default_max(),
            seed: 0,
        }
    }
}

impl SampleSpec {
    pub fn draw(&self) -> Result<Dataset> {
        if self.objective.dim() != 1 {
            return Err(Error::Config("density grids are one-dimensional".into()));
        }
        if !(self.min < self.max) {
            return Err(Error::Config(format!("sample interval [{}, {}] is empty", self.min, self.max)));
        }
        let mut xs = stream(self.seed, Stream::Search);
        let mut noise = stream(self.seed, Stream::Observation);
        let mut ds = Dataset::new(1)?;
        for _ in 0..self.count {
            let x = [xs.random_range(self.min..self.max)];
            let y = self.objective.observe(&x, &mut noise)?;
            ds.push(&x, y)?;
        }
        Ok(ds)
    }
}

/// Seven noisy draws of the trigonometric benchmark (noise variance 0.3) on `[-1, 3]`.
pub fn fig3_dataset(seed: u64) -> Dataset {
    SampleSpec {
        seed,
        ..SampleSpec::default()
    }
    .draw()
    .expect("default sample spec is valid")
}

/// Prior with `y0` the log of a Gaussian of mean 1.5 and variance 5, `K0 = 1`, `xi = 1`.
pub fn fig3_prior(rho: f64) -> Result<PriorSpec> {
    PriorSpec::new(
        rho,
        1.0,
        PriorPrecision::Constant(1.0),
        PriorMean::LogGaussian {
            mu0: Center::Scalar(1.5),
            var0: 5.0,
        },
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityGridConfig {
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_kernel")]
    pub kernel: KernelSpec,
    #[serde(default)]
    pub k0: PriorPrecision,
    #[serde(default = "default_y0")]
    pub y0: PriorMean,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observations: Option<Dataset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleSpec>,
}

fn default_rho() -> f64 {
    0.2
}

fn default_xi() -> f64 {
    1.0
}

fn default_kernel() -> KernelSpec {
    KernelSpec::gaussian(0.01).expect("positive width")
}

fn default_y0() -> PriorMean {
    PriorMean::LogGaussian {
        mu0: Center::Scalar(1.5),
        var0: 5.0,
    }
}

impl Default for DensityGridConfig {
    fn default() -> Self {
        Self {
            rho: default_rho(),
            xi: default_xi(),
            kernel: default_kernel(),
            k0: PriorPrecision::default(),
            y0: default_y0(),
            observations: None,
            sample: None,
        }
    }
}

impl DensityGridConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.posterior()?;
        Ok(cfg)
    }

    pub fn dataset(&self) -> Result<Dataset> {
        match (&self.observations, &self.sample) {
            (Some(_), Some(_)) => Err(Error::Config("give either `observations` or `sample`, not both".into())),
            (Some(ds), None) if ds.dim() != 1 => Err(Error::Config("density grids are one-dimensional".into())),
            (Some(ds), None) => Ok(ds.clone()),
            (None, Some(s)) => s.draw(),
            (None, None) => SampleSpec::default().draw(),
        }
    }

    pub fn posterior(&self) -> Result<PosteriorState> {
        let prior = PriorSpec::new(self.rho, self.xi, self.k0.clone(), self.y0.clone())?;
        PosteriorState::from_dataset(prior, self.kernel, self.dataset()?)
    }
}

#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub log_density: Vec<f64>,
    pub density: Vec<f64>,
    pub dataset: Dataset,
}

pub fn evaluate(config: &DensityGridConfig, min: f64, max: f64, points: usize) -> Result<DensityGrid> {
    if points == 0 {
        return Err(Error::EmptyGrid);
    }
    if !(min < max) && points > 1 {
        return Err(Error::Config(format!("grid min {min} must be below max {max}")));
    }
    let post = config.posterior()?;
    let grid = linspace(min, max, points);
    let log_density = post.log_density_grid(&grid)?;
    let density = crate::posterior::normalize_log_weights(&log_density);
    Ok(DensityGrid {
        xs: grid.into_iter().map(|p| p[0]).collect(),
        log_density,
        density,
        dataset: post.dataset().clone(),
    })
}

/// Writes `density.csv` (x, log_density, density), `observations.csv`,
/// `config.json` and `density.svg` into `dir`.
pub fn emit_density(dir: &Path, result: &DensityGrid, config: &DensityGridConfig) -> Result<()> {
    super::ensure_dir(dir)?;
    let path = dir.join("density.csv");
    let csv_err = |source| Error::Csv {
        path: path.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    w.write_record(["x", "log_density", "density"]).map_err(csv_err)?;
    for ((x, l), d) in result.xs.iter().zip(&result.log_density).zip(&result.density) {
        w.write_record([x.to_string(), l.to_string(), d.to_string()]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let obs_path = dir.join("observations.csv");
    let obs_err = |source| Error::Csv {
        path: obs_path.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(&obs_path).map_err(obs_err)?;
    w.write_record(["x", "y"]).map_err(obs_err)?;
    for (x, y) in result.dataset.iter() {
        w.write_record([x[0].to_string(), y.to_string()]).map_err(obs_err)?;
    }
    w.flush().map_err(|e| Error::io(&obs_path, e))?;

    let mut echo = config.clone();
    if echo.observations.is_none() {
        echo.observations = Some(result.dataset.clone());
        echo.sample = None;
    }
    write_json(&dir.join("config.json"), &echo)?;

    let mut plot = LinePlot::new(
        format!("posterior over the maximizer (rho = {}, width = {})", config.rho, config.kernel.width),
        "x",
        "probability per grid cell",
    );
    plot.push(Series::new("density", result.xs.clone(), result.density.clone()));
    write_text(&dir.join("density.svg"), &plot.render())
}

/// Shannon entropy (nats) of a discrete distribution.
pub fn entropy(weights: &[f64]) -> f64 {
    -weights.iter().filter(|&&w| w > 0.0).map(|w| w * w.ln()).sum::<f64>()
}

/// Number of interior grid points strictly greater than both neighbours.
pub fn local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}
