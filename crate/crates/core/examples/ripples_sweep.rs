//! Sensitivity of the 50-D noisy ripples run to the prior pseudo-location count `xi`.
//!
//! Usage: cargo run --release --example ripples_sweep -- [seed] [xi ...]

use argmax_prior::runner::{run_single, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let xis: Vec<f64> = args.map(|s| s.parse().expect("xi")).collect();
    let xis = if xis.is_empty() { vec![1.0, 10.0, 100.0] } else { xis };
    println!("xi,seed,avg_mean_value,median_regret_last100,mean_value_at_100,final_norm");
    for xi in xis {
        let mut cfg = ExperimentConfig::ripples50();
        cfg.model.xi = Some(xi);
        let trace = run_single(&cfg, seed).expect("run");
        let values: Vec<f64> = trace.records.iter().map(|r| r.mean_value(1.0)).collect();
        let mut tail: Vec<f64> = trace.records.iter().rev().take(100).map(|r| r.regret).collect();
        tail.sort_by(f64::total_cmp);
        let norm = trace.records.last().unwrap().x.iter().map(|v| v * v).sum::<f64>().sqrt();
        println!(
            "{xi},{seed},{:.4},{:.4},{:.4},{:.3}",
            values.iter().sum::<f64>() / values.len() as f64,
            0.5 * (tail[49] + tail[50]),
            values[99],
            norm
        );
    }
}
