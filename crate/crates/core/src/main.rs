use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use argmax_prior::runner::{self, density, ExperimentConfig, Summary};
use argmax_prior::Error;
use clap::{Parser, Subcommand};

/// Argmax-prior optimizer, GP-UCB baseline and benchmark harness.
#[derive(Debug, Parser)]
#[command(name = "argmax-prior", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `base_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restart the sampler chain from its start point before every proposal.
        #[arg(long)]
        restart_chain: bool,
    },
    /// Run the argmax-prior sampler and GP-UCB on the same objective and seeds.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restart the sampler chain from its start point before every proposal.
        #[arg(long)]
        restart_chain: bool,
    },
    /// Write the normalized posterior over the maximizer on a 1-D grid.
    DensityGrid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        grid_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid_max: f64,
        #[arg(long)]
        grid_points: usize,
        #[arg(long, default_value = "results/density-grid")]
        out: PathBuf,
    },
    /// The 50-dimensional noisy ripples run with its published parameters.
    Ripples50 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value = "results/ripples50")]
        out: PathBuf,
        /// Restart the sampler chain from its start point before every proposal.
        #[arg(long)]
        restart_chain: bool,
    },
}

enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.into())
        } else {
            Failure::Runtime(e.into())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_config(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Config)
}

fn load_experiment(
    path: &Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
    restart_chain: bool,
    default_out: &str,
) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::from_json(&read_config(path)?)
        .map_err(|e| Failure::Config(anyhow::Error::new(e).context(path.display().to_string())))?;
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    cfg.mh.restart_chain |= restart_chain;
    cfg.output = Some(out.or(cfg.output).unwrap_or_else(|| PathBuf::from(default_out)));
    Ok(cfg)
}

fn report(label: &str, summary: &Summary) {
    if let Some(last) = summary.rows.last() {
        println!(
            "{label}: step {} mean avg_y {:.4} (sd {:.4}), mean regret {:.4}",
            last.step, last.mean_avg_y, last.std_avg_y, last.mean_regret
        );
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Optimize {
            config,
            seed,
            out,
            restart_chain,
        } => {
            let cfg = load_experiment(&config, seed, out, restart_chain, "results/optimize")?;
            let traces = runner::run_experiment(&cfg)?;
            report(cfg.optimizer.name(), &runner::aggregate(&traces)?);
            println!("wrote {}", cfg.output.as_ref().expect("set above").display());
        }
        Command::Compare {
            config,
            seed,
            out,
            restart_chain,
        } => {
            let cfg = load_experiment(&config, seed, out, restart_chain, "results/compare")?;
            let cmp = runner::compare(&cfg)?;
            report("argmax_thompson", &runner::aggregate(&cmp.argmax)?);
            report("gp_ucb", &runner::aggregate(&cmp.gp_ucb)?);
            println!("wrote {}", cfg.output.as_ref().expect("set above").display());
        }
        Command::DensityGrid {
            config,
            grid_min,
            grid_max,
            grid_points,
            out,
        } => {
            let cfg = density::DensityGridConfig::from_json(&read_config(&config)?)
                .map_err(|e| Failure::Config(anyhow::Error::new(e).context(config.display().to_string())))?;
            let result = density::evaluate(&cfg, grid_min, grid_max, grid_points)?;
            density::emit_density(&out, &result, &cfg)?;
            println!(
                "{} grid points, entropy {:.4} nats, {} local maxima; wrote {}",
                grid_points,
                density::entropy(&result.density),
                density::local_maxima(&result.density),
                out.display()
            );
        }
        Command::Ripples50 {
            seed,
            steps,
            out,
            restart_chain,
        } => {
            let mut cfg = ExperimentConfig::ripples50();
            cfg.mh.restart_chain = restart_chain;
            cfg.base_seed = seed;
            cfg.steps = steps;
            cfg.output = Some(out.clone());
            let traces = runner::run_experiment(&cfg)?;
            report("ripples50", &runner::aggregate(&traces)?);
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
