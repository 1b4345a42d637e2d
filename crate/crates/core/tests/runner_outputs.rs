mod common;

use std::path::Path;

use argmax_prior::objectives::Objective;
use argmax_prior::rng::{stream, Stream};
use argmax_prior::runner::output::{emit_outputs, read_run_csv, write_run_csv, SUMMARY_HEADER};
use argmax_prior::runner::{
    aggregate, run_experiment, run_single, thompson_step, ExperimentConfig, OptimizerKind, RunTrace,
};
use argmax_prior::sampler::{ChainState, MhConfig};
use argmax_prior::{Center, KernelSpec, PosteriorState, PriorMean, PriorPrecision, PriorSpec};
use rand::Rng;

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn small(kind: OptimizerKind, steps: usize, runs: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::trig1d_comparison(kind);
    c.steps = steps;
    c.runs = runs;
    c
}

fn synthetic(seed: u64, len: usize, rng: &mut impl Rng) -> RunTrace {
    let mut t = RunTrace::new(seed);
    for _ in 0..len {
        let y = rng.random_range(-2.0..2.0);
        let m = rng.random_range(-1.0..1.8);
        t.push(vec![rng.random_range(-1.0..3.0)], y, m, 1.9, Default::default());
    }
    t
}

#[test]
fn first_proposal_concentrates_at_prior_peak() {
    let prior = PriorSpec::new(
        1.0,
        1.0,
        PriorPrecision::Constant(1.0),
        PriorMean::Quadratic {
            scale: 50.0,
            center: Center::Scalar(1.0),
        },
    )
    .unwrap();
    let post = PosteriorState::new(prior, KernelSpec::gaussian(0.2).unwrap(), 1).unwrap();
    let obj = Objective::trig1d(0.3).unwrap();
    let mh = MhConfig::new(0.07, 120, 0).unwrap();
    let mut bins = [0usize; 80];
    for seed in 0..1000 {
        let mut chain = ChainState::new(&post, &[0.0]).unwrap();
        let (next, x, _) = thompson_step(
            &post,
            &mut chain,
            &obj,
            &mh,
            &mut stream(seed, Stream::Chain),
            &mut stream(seed, Stream::Observation),
        )
        .unwrap();
        assert_eq!(next.len(), 1);
        let b = ((x[0] + 1.0) / 0.05).floor();
        if (0.0..80.0).contains(&b) {
            bins[b as usize] += 1;
        }
    }
    let mode = (0..80).max_by_key(|&i| bins[i]).unwrap();
    let center = -1.0 + 0.05 * (mode as f64 + 0.5);
    assert!((center - 1.0).abs() <= 0.07f64.sqrt(), "mode at {center}");
}

#[test]
fn golden_trace_is_bit_exact() {
    let cfg = ExperimentConfig::from_json(&std::fs::read_to_string(data("golden_trig1d.json")).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = cfg;
    cfg.output = Some(dir.path().to_path_buf());
    run_experiment(&cfg).unwrap();
    assert_eq!(
        std::fs::read(dir.path().join("run_000.csv")).unwrap(),
        std::fs::read(data("golden_trig1d_run.csv")).unwrap()
    );
}

#[test]
fn trace_columns_are_consistent() {
    for kind in [OptimizerKind::ArgmaxThompson, OptimizerKind::GpUcb, OptimizerKind::RandomSearch] {
        let cfg = small(kind, 60, 1);
        let trace = run_single(&cfg, 3).unwrap();
        assert_eq!(trace.len(), 60);
        let mut sum = 0.0;
        let mut prev_cum = 0.0;
        for (i, r) in trace.records.iter().enumerate() {
            assert_eq!(r.step, i + 1);
            sum += r.y;
            assert!((r.avg_y - sum / (i + 1) as f64).abs() <= 1e-12);
            assert!(r.regret >= 0.0 && r.cum_regret >= prev_cum);
            let truth = cfg.objective.mean_value(&r.x).unwrap();
            assert!((r.mean_value(cfg.objective.optimum().1) - truth).abs() <= 1e-12);
            prev_cum = r.cum_regret;
        }
    }
}

#[test]
fn aggregate_matches_two_pass_oracle() {
    let mut rng = argmax_prior::rng::seeded(4);
    let traces: Vec<RunTrace> = (0..7).map(|s| synthetic(s, 40, &mut rng)).collect();
    let summary = aggregate(&traces).unwrap();
    assert_eq!(summary.rows.len(), 40);
    for (i, row) in summary.rows.iter().enumerate() {
        let avg: Vec<f64> = traces.iter().map(|t| t.records[i].avg_y).collect();
        let reg: Vec<f64> = traces.iter().map(|t| t.records[i].regret).collect();
        let (ma, sa) = common::mean_std(&avg);
        let (mr, sr) = common::mean_std(&reg);
        assert!((row.mean_avg_y - ma).abs() <= 1e-12 && (row.std_avg_y - sa).abs() <= 1e-12);
        assert!((row.mean_regret - mr).abs() <= 1e-12 && (row.std_regret - sr).abs() <= 1e-12);
    }
}

#[test]
fn aggregate_edge_cases() {
    let mut rng = argmax_prior::rng::seeded(5);
    let one = synthetic(0, 10, &mut rng);
    let s = aggregate(std::slice::from_ref(&one)).unwrap();
    assert_eq!(s.mean_avg_y(), one.avg_y());
    assert!(s.std_avg_y().iter().all(|&v| v == 0.0));

    let constant = |v: f64| {
        let mut t = RunTrace::new(0);
        for _ in 0..5 {
            t.push(vec![0.0], v, 0.0, 1.0, Default::default());
        }
        t
    };
    let s = aggregate(&[constant(1.0), constant(4.0)]).unwrap();
    assert!(s.rows.iter().all(|r| r.mean_avg_y == 2.5 && r.std_avg_y == 1.5));

    assert!(aggregate(&[]).unwrap().rows.is_empty());
    assert!(aggregate(&[synthetic(0, 3, &mut rng), synthetic(1, 4, &mut rng)]).is_err());
}

#[test]
fn run_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let trace = run_single(&small(OptimizerKind::ArgmaxThompson, 30, 1), 9).unwrap();
    let path = dir.path().join("nested/run.csv");
    write_run_csv(&path, &trace, 1).unwrap();
    let back = read_run_csv(&path).unwrap();
    assert_eq!(back.len(), trace.len());
    for (a, b) in back.iter().zip(&trace.records) {
        assert_eq!((a.step, &a.x, a.y, a.avg_y, a.regret, a.cum_regret), (b.step, &b.x, b.y, b.avg_y, b.regret, b.cum_regret));
    }

    let mut rng = argmax_prior::rng::seeded(1);
    let mut wide = RunTrace::new(0);
    for _ in 0..5 {
        let x: Vec<f64> = (0..4).map(|_| rng.random::<f64>() * 1e-300).collect();
        wide.push(x, f64::MIN_POSITIVE, -1.0, 1.0, Default::default());
    }
    write_run_csv(&path, &wide, 4).unwrap();
    let back = read_run_csv(&path).unwrap();
    assert!(back.iter().zip(&wide.records).all(|(a, b)| a.x == b.x && a.y == b.y));
}

#[test]
fn emitted_files_are_complete_and_parse() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(OptimizerKind::GpUcb, 15, 3);
    cfg.output = Some(dir.path().to_path_buf());
    let traces = run_experiment(&cfg).unwrap();
    for f in ["run_000.csv", "run_001.csv", "run_002.csv", "summary.csv", "config.json", "avg_y.svg", "regret.svg"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().next().unwrap(), SUMMARY_HEADER.join(","));
    assert_eq!(summary.lines().count(), 16);

    for svg in ["avg_y.svg", "regret.svg"] {
        let text = std::fs::read_to_string(dir.path().join(svg)).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
        assert_eq!(polylines, 1, "{svg}");
    }

    let echo = ExperimentConfig::from_json(&std::fs::read_to_string(dir.path().join("config.json")).unwrap()).unwrap();
    assert_eq!(echo.steps, 15);
    assert_eq!(echo.optimizer, OptimizerKind::GpUcb);
    assert_eq!(traces.iter().map(|t| t.seed).collect::<Vec<_>>(), vec![0, 1, 2]);
}

#[test]
fn comparison_plot_has_one_polyline_per_method() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(OptimizerKind::ArgmaxThompson, 10, 2);
    cfg.output = Some(dir.path().to_path_buf());
    argmax_prior::runner::compare(&cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("compare.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 2);
    assert!(dir.path().join("argmax_thompson/summary.csv").is_file());
    assert!(dir.path().join("gp_ucb/summary.csv").is_file());
}

#[test]
fn empty_summary_still_has_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(OptimizerKind::RandomSearch, 5, 1);
    emit_outputs(dir.path(), &[], &aggregate(&[]).unwrap(), &cfg).unwrap();
    let text = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(text.trim_end(), SUMMARY_HEADER.join(","));
}

#[test]
fn same_seed_same_bytes() {
    let run = |sub: &str| {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small(OptimizerKind::ArgmaxThompson, 20, 3);
        cfg.base_seed = 77;
        cfg.output = Some(dir.path().join(sub));
        run_experiment(&cfg).unwrap();
        ["run_000.csv", "run_002.csv", "summary.csv", "config.json", "avg_y.svg"]
            .map(|f| std::fs::read(dir.path().join(sub).join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn unwritable_output_reports_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let mut cfg = small(OptimizerKind::RandomSearch, 2, 1);
    cfg.output = Some(blocker.join("out"));
    let err = run_experiment(&cfg).unwrap_err();
    assert!(err.to_string().contains("file"), "{err}");
}

#[test]
fn argmax_beats_random_search_floor() {
    let final_mean = |kind| {
        let traces = run_experiment(&small(kind, 200, 10)).unwrap();
        *aggregate(&traces).unwrap().mean_avg_y().last().unwrap()
    };
    let argmax = final_mean(OptimizerKind::ArgmaxThompson);
    let random = final_mean(OptimizerKind::RandomSearch);
    assert!(argmax > random, "{argmax} vs {random}");
}

#[test]
fn restarting_the_chain_changes_the_trace() {
    let warm = small(OptimizerKind::ArgmaxThompson, 20, 1);
    let mut cold = warm.clone();
    cold.mh.restart_chain = true;
    let (a, b) = (run_single(&warm, 1).unwrap(), run_single(&cold, 1).unwrap());
    assert_eq!(a.records[0].x, b.records[0].x);
    assert_ne!(a.records, b.records);
}

#[test]
fn low_dimensional_ripples_time_averaged_regret_eventually_falls() {
    let mut cfg = ExperimentConfig::ripples50();
    cfg.objective = Objective::noisy_ripples(vec![0.0; 2], 0.1).unwrap();
    cfg.steps = 300;
    let trace = run_single(&cfg, 0).unwrap();
    let avg: Vec<f64> = trace.records.iter().map(|r| r.cum_regret / r.step as f64).collect();
    let peak = avg.iter().cloned().fold(f64::MIN, f64::max);
    assert!(*avg.last().unwrap() < peak);
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(norm(&trace.records.last().unwrap().x) < 0.5 * norm(&trace.records[0].x));
}
