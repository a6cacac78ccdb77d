#![allow(clippy::neg_cmp_op_on_partial_ord)]

use anyhow::Result;
use clap::{Parser, Subcommand};

mod commands;
mod io;

#[derive(Parser, Debug)]
#[command(
    author,
    version,
    about = "Overlapping group shrinkage denoising toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Denoise a one-column CSV signal with 1D OGS.
    #[command(name = "denoise-1d")]
    Denoise1d(commands::Denoise1dArgs),
    /// Denoise a 16-bit WAV file by OGS on its spectrogram.
    #[command(name = "denoise-wav")]
    DenoiseWav(commands::DenoiseWavArgs),
    /// Measure noise attenuation against lambda, or solve lambda for a target.
    Calibrate(commands::CalibrateArgs),
    /// Estimate the MSE over a lambda grid with Monte-Carlo SURE.
    #[command(name = "sure-scan")]
    SureScan(commands::SureScanArgs),
    /// Run the group-sparse benchmark and write a JSON report.
    #[command(name = "benchmark-ex1")]
    BenchmarkEx1(commands::BenchmarkArgs),
    /// Print the scalar threshold function value theta(y).
    Threshold(commands::ThresholdArgs),
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Denoise1d(a) => commands::denoise_1d(&a),
        Command::DenoiseWav(a) => commands::denoise_wav(&a),
        Command::Calibrate(a) => commands::calibrate(&a),
        Command::SureScan(a) => commands::sure_scan(&a),
        Command::BenchmarkEx1(a) => commands::benchmark(&a),
        Command::Threshold(a) => commands::threshold(&a),
    }
}
