//! WebAssembly bindings for the browser demo. Every export takes plain numbers
//! and returns a JSON string, so the page needs no generated type glue beyond
//! the functions themselves.

use argmax_prior::objectives::{Objective, TRIG1D_MAX};
use argmax_prior::runner::density::{self, DensityGridConfig, SampleSpec};
use argmax_prior::runner::{aggregate, run_experiment, run_single, ExperimentConfig, OptimizerKind};
use argmax_prior::KernelSpec;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct DensityView {
    pub xs: Vec<f64>,
    pub density: Vec<f64>,
    pub objective: Vec<f64>,
    pub obs_x: Vec<f64>,
    pub obs_y: Vec<f64>,
    pub entropy: f64,
    pub local_maxima: usize,
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub name: &'static str,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct CompareView {
    pub optimum: f64,
    pub curves: Vec<Curve>,
}

#[derive(Debug, Serialize)]
pub struct PathView {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub time_avg: Vec<f64>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Posterior over the maximizer of the trigonometric benchmark on `[-1, 3]`,
/// after `count` noisy observations drawn with `seed`.
pub fn density_view(rho: f64, width: f64, count: usize, seed: u64, points: usize) -> Result<DensityView, String> {
    let cfg = DensityGridConfig {
        rho,
        kernel: KernelSpec::gaussian(width).map_err(err)?,
        sample: Some(SampleSpec {
            count,
            seed,
            ..SampleSpec::default()
        }),
        ..DensityGridConfig::default()
    };
    let grid = density::evaluate(&cfg, -1.0, 3.0, points.max(2)).map_err(err)?;
    let f = Objective::trig1d(0.0).map_err(err)?;
    Ok(DensityView {
        objective: grid.xs.iter().map(|&x| f.mean_value(&[x]).unwrap_or(f64::NAN)).collect(),
        obs_x: grid.dataset.points().map(|p| p[0]).collect(),
        obs_y: grid.dataset.values().to_vec(),
        entropy: density::entropy(&grid.density),
        local_maxima: density::local_maxima(&grid.density),
        xs: grid.xs,
        density: grid.density,
    })
}

/// Mean time-averaged observation of the argmax-prior sampler, GP-UCB and
/// random search on the trigonometric benchmark.
pub fn compare_view(rho: f64, kernel_variance: f64, noise_variance: f64, runs: usize, steps: usize, seed: u64) -> Result<CompareView, String> {
    let mut curves = Vec::new();
    for kind in [OptimizerKind::ArgmaxThompson, OptimizerKind::GpUcb, OptimizerKind::RandomSearch] {
        let mut cfg = ExperimentConfig::trig1d_comparison(kind);
        cfg.objective = Objective::trig1d(noise_variance).map_err(err)?;
        cfg.model.rho = Some(rho);
        cfg.model.kernel = Some(KernelSpec::gaussian_from_variance(kernel_variance).map_err(err)?);
        cfg.runs = runs.max(1);
        cfg.steps = steps.max(1);
        cfg.base_seed = seed;
        let summary = aggregate(&run_experiment(&cfg).map_err(err)?).map_err(err)?;
        curves.push(Curve {
            name: kind.name(),
            mean: summary.mean_avg_y(),
            std: summary.std_avg_y(),
        });
    }
    Ok(CompareView {
        optimum: TRIG1D_MAX,
        curves,
    })
}

/// Test locations chosen on a 2-D noisy ripples function with the
/// high-dimensional recipe (chain start 20 on each axis, 120 steps of variance 0.07).
pub fn ripples_view(rho: f64, width: f64, steps: usize, seed: u64) -> Result<PathView, String> {
    let mut cfg = ExperimentConfig::ripples50();
    cfg.objective = Objective::noisy_ripples(vec![0.0; 2], 0.1).map_err(err)?;
    cfg.model.rho = Some(rho);
    cfg.model.kernel = Some(KernelSpec::gaussian(width).map_err(err)?);
    cfg.steps = steps.max(1);
    let trace = run_single(&cfg, seed).map_err(err)?;
    let f_star = cfg.objective.optimum().1;
    let values: Vec<f64> = trace.records.iter().map(|r| r.mean_value(f_star)).collect();
    let mut sum = 0.0;
    let time_avg = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            sum += v;
            sum / (i + 1) as f64
        })
        .collect();
    Ok(PathView {
        xs: trace.records.iter().map(|r| r.x[0]).collect(),
        ys: trace.records.iter().map(|r| r.x[1]).collect(),
        values,
        time_avg,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn posterior_density(rho: f64, width: f64, count: u32, seed: u32, points: u32) -> Result<String, JsError> {
    to_js(density_view(rho, width, count as usize, seed as u64, points as usize))
}

#[wasm_bindgen]
pub fn compare_methods(
    rho: f64,
    kernel_variance: f64,
    noise_variance: f64,
    runs: u32,
    steps: u32,
    seed: u32,
) -> Result<String, JsError> {
    to_js(compare_view(rho, kernel_variance, noise_variance, runs as usize, steps as usize, seed as u64))
}

#[wasm_bindgen]
pub fn ripples_path(rho: f64, width: f64, steps: u32, seed: u32) -> Result<String, JsError> {
    to_js(ripples_view(rho, width, steps as usize, seed as u64))
}
