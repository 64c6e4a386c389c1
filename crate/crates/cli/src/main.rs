use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use fermiblock::experiment::{load_config, run_experiment, RunOptions};

/// Run one block-encoding experiment described by a config file.
#[derive(Debug, Parser)]
#[command(name = "fermiblock", version)]
struct Args {
    /// Experiment configuration file.
    config: PathBuf,

    /// Directory receiving the CSV and report files.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,

    /// Override the seed given in the configuration.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for sweep points (0 uses all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn run(args: &Args) -> anyhow::Result<()> {
    let cfg =
        load_config(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let opts = RunOptions {
        output_dir: args.output_dir.clone(),
        seed: args.seed,
        jobs: args.jobs,
    };
    let outcome =
        run_experiment(&cfg, &opts).with_context(|| format!("running `{}`", cfg.command))?;
    println!(
        "{}: {} rows -> {} (report {})",
        cfg.command,
        outcome.table.rows.len(),
        outcome.csv_path.display(),
        outcome.report_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
