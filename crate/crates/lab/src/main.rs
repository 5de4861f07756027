use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groupoid_lab::{
    check_expectations, emit_summary, list_experiments, run_experiment, BatchConfig,
    ExperimentConfig, LabError, Result, RunReport,
};

/// Worker threads for the experiment pool; never changes any output.
const WORKERS_VAR: &str = "GROUPOID_LAB_WORKERS";

#[derive(Parser)]
#[command(
    name = "groupoid-lab",
    version,
    about = "Run invariant-operator experiment batches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch config and check its expected verdicts.
    Run {
        config: PathBuf,
        /// Override every experiment's horizon.
        #[arg(long)]
        horizon: Option<usize>,
        /// Override every experiment's decay threshold.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override every experiment's non-decay floor.
        #[arg(long)]
        floor: Option<f64>,
        /// Override the output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the builtin experiments.
    List,
    /// Tabulate one or more report.json files.
    Summary {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
    /// Print a batch config running the named builtins with their defaults.
    Init {
        #[arg(required = true)]
        experiments: Vec<String>,
        #[arg(long, default_value = "runs")]
        output: PathBuf,
    },
}

fn configure_pool() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_VAR) else {
        return Ok(());
    };
    let workers: usize = value
        .parse()
        .map_err(|_| LabError::ConfigInvalid(format!("{WORKERS_VAR}={value:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| LabError::ConfigInvalid(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            horizon,
            epsilon,
            floor,
            output,
        } => {
            configure_pool()?;
            let text = std::fs::read_to_string(&config).map_err(|e| LabError::io(&config, e))?;
            let mut batch = BatchConfig::from_toml(&text)?;
            for e in &mut batch.experiments {
                e.horizon = horizon.or(e.horizon);
                e.epsilon = epsilon.or(e.epsilon);
                e.floor = floor.or(e.floor);
            }
            if let Some(out) = output {
                batch.output = out;
            }
            let report = run_experiment(&batch)?;
            print!("{}", emit_summary(std::slice::from_ref(&report)));
            check_expectations(&report)
        }
        Command::List => {
            for e in list_experiments() {
                println!("{:<32} {} → {}", e.name, e.summary, e.anchor);
            }
            Ok(())
        }
        Command::Summary { reports } => {
            let reports = reports
                .iter()
                .map(|p| RunReport::load(p))
                .collect::<Result<Vec<_>>>()?;
            print!("{}", emit_summary(&reports));
            reports.iter().try_for_each(check_expectations)
        }
        Command::Init {
            experiments,
            output,
        } => {
            let batch = BatchConfig {
                output,
                experiments: experiments
                    .iter()
                    .map(|e| ExperimentConfig::builtin(e))
                    .collect(),
            };
            batch.validate()?;
            print!("{}", batch.to_toml());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
