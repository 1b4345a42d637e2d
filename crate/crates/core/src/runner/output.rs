//! Result files: per-run CSV traces, the cross-run summary, a JSON echo of the
//! resolved configuration, and SVG plots.
//!
//! Floats are written with Rust's shortest round-trip formatting, so parsing a
//! file gives back the exact in-memory values.

use std::path::Path;
use std::time::Duration;

use super::config::ExperimentConfig;
use super::plot::{LinePlot, Series};
use super::trace::{RunTrace, StepRecord, Summary};
use crate::error::{Error, Result};

pub const SUMMARY_HEADER: [&str; 5] = ["step", "mean_avg_y", "std_avg_y", "mean_regret", "std_regret"];

pub fn run_file_name(k: usize) -> String {
    format!("run_{k:03}.csv")
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn run_header(dim: usize) -> Vec<String> {
    let mut h = vec!["step".to_string()];
    h.extend((1..=dim).map(|i| format!("x{i}")));
    h.extend(["y", "avg_y", "regret", "cum_regret"].map(String::from));
    h
}

pub fn write_run_csv(path: &Path, trace: &RunTrace, dim: usize) -> Result<()> {
    if let Some(dir) = path.parent() {
        super::ensure_dir(dir)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(run_header(dim)).map_err(csv_err(path))?;
    for r in &trace.records {
        let mut row = vec![r.step.to_string()];
        row.extend(r.x.iter().map(f64::to_string));
        row.extend([r.y, r.avg_y, r.regret, r.cum_regret].map(|v| v.to_string()));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Parses a file written by [`write_run_csv`]. Wall-clock times are not stored and come back as zero.
pub fn read_run_csv(path: &Path) -> Result<Vec<StepRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let headers = rdr.headers().map_err(csv_err(path))?.clone();
    let dim = headers.len().checked_sub(5).filter(|&d| d >= 1).ok_or_else(|| {
        Error::Config(format!("{}: unexpected header {:?}", path.display(), headers))
    })?;
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Config(format!("{}: bad number `{s}`", path.display())))
    };
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err(path))?;
        let step = row[0]
            .parse()
            .map_err(|_| Error::Config(format!("{}: bad step `{}`", path.display(), &row[0])))?;
        let x = (1..=dim).map(|i| parse(&row[i])).collect::<Result<Vec<_>>>()?;
        records.push(StepRecord {
            step,
            x,
            y: parse(&row[dim + 1])?,
            avg_y: parse(&row[dim + 2])?,
            regret: parse(&row[dim + 3])?,
            cum_regret: parse(&row[dim + 4])?,
            wall_clock: Duration::ZERO,
        });
    }
    Ok(records)
}

pub fn write_summary_csv(path: &Path, summary: &Summary) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(SUMMARY_HEADER).map_err(csv_err(path))?;
    for r in &summary.rows {
        w.write_record([
            r.step.to_string(),
            r.mean_avg_y.to_string(),
            r.std_avg_y.to_string(),
            r.mean_regret.to_string(),
            r.std_regret.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

fn steps_axis(summary: &Summary) -> Vec<f64> {
    summary.rows.iter().map(|r| r.step as f64).collect()
}

/// Writes every result file of one experiment into `dir`.
pub fn emit_outputs(dir: &Path, traces: &[RunTrace], summary: &Summary, config: &ExperimentConfig) -> Result<()> {
    super::ensure_dir(dir)?;
    let dim = config.objective.dim();
    for (k, t) in traces.iter().enumerate() {
        write_run_csv(&dir.join(run_file_name(k)), t, dim)?;
    }
    write_summary_csv(&dir.join("summary.csv"), summary)?;

    let mut echo = config.resolved()?;
    echo.output = None;
    write_json(&dir.join("config.json"), &echo)?;

    let name = config.optimizer.name();
    let steps = steps_axis(summary);
    let mut avg = LinePlot::new(
        format!("{} on {}: time-averaged observation", name, config.objective.name()),
        "step",
        "avg y (mean ± 1 sd)",
    );
    avg.push(Series::new(name, steps.clone(), summary.mean_avg_y()).with_band(summary.std_avg_y()));
    write_text(&dir.join("avg_y.svg"), &avg.render())?;

    let mut regret = LinePlot::new(
        format!("{} on {}: instantaneous regret", name, config.objective.name()),
        "step",
        "regret (mean ± 1 sd)",
    );
    regret.push(Series::new(name, steps, summary.mean_regret()).with_band(summary.std_regret()));
    write_text(&dir.join("regret.svg"), &regret.render())
}

/// Joint summary of two methods run on identical seeds.
pub fn emit_comparison(dir: &Path, argmax: &Summary, gp_ucb: &Summary) -> Result<()> {
    super::ensure_dir(dir)?;
    let path = dir.join("compare_summary.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record([
        "step",
        "argmax_mean_avg_y",
        "argmax_std_avg_y",
        "gp_ucb_mean_avg_y",
        "gp_ucb_std_avg_y",
    ])
    .map_err(csv_err(&path))?;
    for (a, g) in argmax.rows.iter().zip(&gp_ucb.rows) {
        w.write_record([
            a.step.to_string(),
            a.mean_avg_y.to_string(),
            a.std_avg_y.to_string(),
            g.mean_avg_y.to_string(),
            g.std_avg_y.to_string(),
        ])
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let mut plot = LinePlot::new("time-averaged observation", "step", "avg y (mean ± 1 sd)");
    plot.push(Series::new("argmax prior", steps_axis(argmax), argmax.mean_avg_y()).with_band(argmax.std_avg_y()));
    plot.push(Series::new("GP-UCB", steps_axis(gp_ucb), gp_ucb.mean_avg_y()).with_band(gp_ucb.std_avg_y()));
    write_text(&dir.join("compare.svg"), &plot.render())
}
