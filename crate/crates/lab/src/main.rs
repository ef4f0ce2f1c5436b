//! `qcorr-lab`: reproducible experiment runner for the qcorr library.
//!
//! ```text
//! qcorr-lab <experiment> [--config <path>] [--key value ...]
//! ```
//!
//! Exit codes: 0 on success, 2 when a swept state fails validation, 3 when
//! outputs disagree with the bundled reference data.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;

use clap::Parser;

use config::{Experiment, ExperimentConfig, Overrides};
use qcorr::config::LogBase;

#[derive(Parser, Debug)]
#[command(
    name = "qcorr-lab",
    about = "Run the bundled correlation-measure experiments and emit CSV/JSON artifacts",
    version
)]
struct Cli {
    /// Which experiment to run.
    #[arg(value_enum)]
    experiment: Experiment,

    /// Flat key=value configuration file; CLI flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Parameter-sweep lower bound (example1).
    #[arg(long = "x_min")]
    x_min: Option<f64>,

    /// Parameter-sweep upper bound (example1).
    #[arg(long = "x_max")]
    x_max: Option<f64>,

    /// Parameter-sweep step (example1).
    #[arg(long = "x_step")]
    x_step: Option<f64>,

    /// Time-grid lower bound (example2, thermal).
    #[arg(long = "t_min")]
    t_min: Option<f64>,

    /// Time-grid upper bound (example2, thermal).
    #[arg(long = "t_max")]
    t_max: Option<f64>,

    /// Time-grid step (example2, thermal).
    #[arg(long = "dt")]
    dt: Option<f64>,

    /// Inverse temperature (thermal).
    #[arg(long = "beta")]
    beta: Option<f64>,

    /// Logarithm base for entropy columns: natural or two.
    #[arg(long = "log_base")]
    log_base: Option<LogBase>,

    /// Magnitude below which a rate counts as sign zero.
    #[arg(long = "zero_eps")]
    zero_eps: Option<f64>,

    /// Directory for CSV/JSON artifacts.
    #[arg(long = "output_dir")]
    output_dir: Option<PathBuf>,

    /// Seed echoed into reports (the bundled experiments are
    /// deterministic).
    #[arg(long = "seed")]
    seed: Option<u64>,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            x_min: self.x_min,
            x_max: self.x_max,
            x_step: self.x_step,
            t_min: self.t_min,
            t_max: self.t_max,
            dt: self.dt,
            beta: self.beta,
            log_base: self.log_base,
            zero_eps: self.zero_eps,
            output_dir: self.output_dir.clone(),
            seed: self.seed,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let config = match ExperimentConfig::resolve(cli.experiment, cli.config.as_deref(), &cli.overrides()) {
        Ok(config) => config,
        Err(error) => {
            eprintln!("qcorr-lab: {error}");
            std::process::exit(1);
        }
    };

    match experiments::run(&config) {
        Ok(status) => {
            println!(
                "{}: wrote artifacts to {} ({})",
                config.experiment,
                config.output_dir.display(),
                match status {
                    experiments::RunStatus::Ok => "ok",
                    experiments::RunStatus::ValidationFailure => "state validation failed",
                    experiments::RunStatus::ReferenceMismatch => "reference mismatch",
                }
            );
            std::process::exit(status.exit_code());
        }
        Err(error) => {
            eprintln!("qcorr-lab: {error}");
            std::process::exit(1);
        }
    }
}
