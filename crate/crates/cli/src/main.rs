mod config;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Experiment runner: configures learner, distribution, and grid, then
/// dispatches to the analysis and adversary pipelines.
#[derive(Parser, Debug)]
#[command(name = "infolearn", version, about)]
struct Cli {
    /// Experiment kind: mi-exact | mi-estimate | prior-bound | gen-gap |
    /// stability | pac-bayes | lower-bound | sharpness | net-learner |
    /// boost | far-optimal
    kind: String,

    /// Path to the key = value configuration file.
    #[arg(long)]
    config: PathBuf,

    /// Output directory for report.json and grid.csv.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads for grid cells.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match runner::run(&cli.kind, &cli.config, &cli.out, cli.workers) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
