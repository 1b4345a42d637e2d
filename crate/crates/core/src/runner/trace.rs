use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step index.
    pub step: usize,
    pub x: Vec<f64>,
    pub y: f64,
    /// Mean of the observations made so far, this one included.
    pub avg_y: f64,
    /// Gap between the optimal and the attained noiseless value, clamped at zero.
    pub regret: f64,
    pub cum_regret: f64,
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl StepRecord {
    /// Noiseless objective value at `x`, recovered from the regret.
    pub fn mean_value(&self, optimum_value: f64) -> f64 {
        optimum_value - self.regret
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub seed: u64,
    pub records: Vec<StepRecord>,
    sum_y: f64,
}

impl RunTrace {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            records: Vec::new(),
            sum_y: 0.0,
        }
    }

    pub fn from_records(seed: u64, records: Vec<StepRecord>) -> Self {
        let sum_y = records.iter().map(|r| r.y).sum();
        Self { seed, records, sum_y }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends an observation, deriving the running average and regret columns.
    pub fn push(&mut self, x: Vec<f64>, y: f64, mean_value: f64, optimum_value: f64, wall_clock: Duration) {
        let step = self.records.len() + 1;
        let cum_prev = self.records.last().map_or(0.0, |r| r.cum_regret);
        let regret = (optimum_value - mean_value).max(0.0);
        self.sum_y += y;
        self.records.push(StepRecord {
            step,
            x,
            y,
            avg_y: self.sum_y / step as f64,
            regret,
            cum_regret: cum_prev + regret,
            wall_clock,
        });
    }

    pub fn avg_y(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.avg_y).collect()
    }

    pub fn regret(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.regret).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub step: usize,
    pub mean_avg_y: f64,
    pub std_avg_y: f64,
    pub mean_regret: f64,
    pub std_regret: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

/// Per-step mean and population standard deviation across runs.
pub fn aggregate(traces: &[RunTrace]) -> Result<Summary> {
    let Some(first) = traces.first() else {
        return Ok(Summary::default());
    };
    let len = first.len();
    for t in traces {
        if t.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: t.len(),
            });
        }
    }
    let rows = (0..len)
        .map(|i| {
            let (mean_avg_y, std_avg_y) = mean_std(traces.iter().map(|t| t.records[i].avg_y));
            let (mean_regret, std_regret) = mean_std(traces.iter().map(|t| t.records[i].regret));
            SummaryRow {
                step: i + 1,
                mean_avg_y,
                std_avg_y,
                mean_regret,
                std_regret,
            }
        })
        .collect();
    Ok(Summary { rows })
}

/// Welford's single-pass mean and population standard deviation.
fn mean_std(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for x in xs {
        n += 1;
        let d = x - mean;
        mean += d / n as f64;
        m2 += d * (x - mean);
    }
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    (mean, (m2 / n as f64).max(0.0).sqrt())
}

impl Summary {
    pub fn mean_avg_y(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_avg_y).collect()
    }

    pub fn std_avg_y(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.std_avg_y).collect()
    }

    pub fn mean_regret(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_regret).collect()
    }

    pub fn std_regret(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.std_regret).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(ys: &[f64]) -> RunTrace {
        let mut t = RunTrace::new(0);
        for &y in ys {
            t.push(vec![0.0], y, y, 1.0, Duration::ZERO);
        }
        t
    }

    #[test]
    fn running_columns() {
        let t = trace(&[1.0, 0.0, -1.0, 0.5]);
        assert_eq!(t.avg_y(), vec![1.0, 0.5, 0.0, 0.125]);
        let cum: Vec<f64> = t.records.iter().map(|r| r.cum_regret).collect();
        assert_eq!(cum, vec![0.0, 1.0, 3.0, 3.5]);
        assert_eq!(t.records[3].step, 4);
    }

    #[test]
    fn regret_never_negative() {
        let mut t = RunTrace::new(0);
        t.push(vec![0.0], 2.0, 1.0 + 1e-16, 1.0, Duration::ZERO);
        assert_eq!(t.records[0].regret, 0.0);
    }

    #[test]
    fn single_trace_summary() {
        let t = trace(&[0.3, 0.1, 0.7]);
        let s = aggregate(std::slice::from_ref(&t)).unwrap();
        assert_eq!(s.mean_avg_y(), t.avg_y());
        assert!(s.std_avg_y().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_constant_traces() {
        let s = aggregate(&[trace(&[2.0; 5]), trace(&[-1.0; 5])]).unwrap();
        for r in &s.rows {
            assert!((r.mean_avg_y - 0.5).abs() < 1e-15);
            assert!((r.std_avg_y - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_and_mismatched() {
        assert!(aggregate(&[]).unwrap().rows.is_empty());
        assert!(matches!(
            aggregate(&[trace(&[1.0]), trace(&[1.0, 2.0])]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
