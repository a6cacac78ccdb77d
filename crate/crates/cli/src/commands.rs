use crate::io::{file_kind, read_signal_csv, write_signal_csv, FileKind};
use anyhow::{bail, Context, Result};
use clap::Args;
use ndarray::Array2;
use ogs_core::calibration::{
    estimate_alpha, solve_lambda_for_alpha, AlphaSetup, CalibrationEntry, CalibrationTable,
    SolveOptions,
};
use ogs_core::ogs::ogs_denoise;
use ogs_core::shrinkage::ThresholdProblem;
use ogs_core::spectral::{denoise_speech_detailed, istft, stft, Spectrogram, SpectrogramPlan};
use ogs_core::sure::{self, log_grid, sure_scan_2d, SureOptions};
use ogs_core::toolkit::{
    benchmark_example1, empirical_wiener_post, estimate_sigma_mad, estimate_sigma_spectrogram,
    read_wav, write_wav, BenchmarkConfig, LambdaMode,
};
use ogs_core::{GroupShape, OgsTemplate, Penalty, PenaltyKind};
use serde::Serialize;
use std::fs::File;
use std::path::PathBuf;

const SPEECH_ALPHA: f64 = 3e-4;
const SOLVE_SAMPLES: usize = 200_000;

#[derive(Args, Debug)]
pub struct Denoise1dArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    penalty: PenaltyKind,
    /// Regularization parameter in signal units.
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    lambda: Option<f64>,
    /// Target noise attenuation; lambda is calibrated and scaled by sigma.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 25)]
    iters: usize,
    /// Noise standard deviation; estimated by MAD when absent.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct DenoiseWavArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "atan")]
    penalty: PenaltyKind,
    /// Group extent along frequency; defaults to 8 at 16 kHz and 7 otherwise.
    #[arg(long)]
    k1: Option<usize>,
    /// Group extent along time.
    #[arg(long, default_value_t = 2)]
    k2: usize,
    #[arg(long, default_value_t = SPEECH_ALPHA)]
    alpha: f64,
    /// Time-domain noise standard deviation; estimated from high-frequency bins when absent.
    #[arg(long)]
    sigma: Option<f64>,
    /// Apply empirical Wiener post-processing.
    #[arg(long)]
    ewp: bool,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 25)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[arg(long)]
    penalty: PenaltyKind,
    #[arg(long)]
    beta: f64,
    /// Group shape, `K` or `K1xK2`.
    #[arg(long)]
    k: GroupShape,
    #[arg(long, default_value_t = 25)]
    iters: usize,
    /// Comma-separated lambda values to measure.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "target_alpha",
        conflicts_with = "target_alpha"
    )]
    lambdas: Vec<f64>,
    /// Solve for the lambda reaching this attenuation instead.
    #[arg(long)]
    target_alpha: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    n_samples: usize,
}

#[derive(Args, Debug)]
pub struct SureScanArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Time-domain noise standard deviation.
    #[arg(long)]
    sigma: f64,
    /// Grid bounds, in multiples of the noise level of the denoised domain.
    #[arg(long)]
    lambda_min: f64,
    #[arg(long)]
    lambda_max: f64,
    #[arg(long)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Clean signal in the same format as the input; adds a true_mse column.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value = "atan")]
    penalty: PenaltyKind,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Group shape, `K` or `K1xK2`; defaults to 5 for CSV and 8x2 or 7x2 for WAV.
    #[arg(long)]
    k: Option<GroupShape>,
    #[arg(long, default_value_t = 25)]
    iters: usize,
    #[arg(long, default_value_t = 1)]
    probes: usize,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    /// Number of seeds, run as 0..seeds.
    #[arg(long)]
    seeds: u64,
    #[arg(long)]
    out: PathBuf,
    /// `max-snr` or `alpha:<f>`.
    #[arg(long, default_value = "max-snr")]
    mode: LambdaMode,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    penalty: PenaltyKind,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    y: f64,
}

#[derive(Serialize)]
struct RunSummary<'a> {
    command: &'a str,
    seed: u64,
    penalty: PenaltyKind,
    shape: String,
    beta: f64,
    iterations: usize,
    sigma: Option<f64>,
    alpha: Option<f64>,
    lambda_unit: Option<f64>,
    lambda: f64,
    input: String,
    output: String,
}

fn print_summary(summary: &RunSummary<'_>) -> Result<()> {
    println!("{}", serde_json::to_string(summary)?);
    Ok(())
}

fn speech_shape(sample_rate: u32, k1: Option<usize>, k2: usize) -> Result<GroupShape> {
    let k1 = k1.unwrap_or(if sample_rate >= 16_000 { 8 } else { 7 });
    Ok(GroupShape::new(k1, k2)?)
}

fn solve_unit_lambda(setup: &AlphaSetup, alpha: f64, seed: u64) -> Result<f64> {
    let options = SolveOptions {
        n_samples: SOLVE_SAMPLES,
        seed,
        ..Default::default()
    };
    let sol = solve_lambda_for_alpha(alpha, setup, &options)
        .with_context(|| format!("calibrating lambda for alpha = {alpha}"))?;
    log::info!(
        "alpha {alpha} -> unit lambda {:.5} after {} evaluations",
        sol.lambda,
        sol.evaluations.len()
    );
    Ok(sol.lambda)
}

pub fn denoise_1d(args: &Denoise1dArgs) -> Result<()> {
    let y = read_signal_csv(&args.input)?;
    let shape = GroupShape::one_d(args.k)?;
    let setup = AlphaSetup::new(shape, args.penalty, args.beta, args.iters);
    let (lambda, lambda_unit, sigma) = match (args.lambda, args.alpha) {
        (Some(lambda), _) => (lambda, None, args.sigma),
        (None, Some(alpha)) => {
            let sigma = match args.sigma {
                Some(s) => s,
                None => estimate_sigma_mad(&y)?,
            };
            if !(sigma > 0.0) {
                bail!("noise level must be positive, got {sigma}");
            }
            let unit = solve_unit_lambda(&setup, alpha, args.seed)?;
            (unit * sigma, Some(unit), Some(sigma))
        }
        (None, None) => bail!("either --lambda or --alpha is required"),
    };
    let cfg = setup.config(lambda)?;
    let x = ogs_denoise(&y, &cfg)?.estimate;
    write_signal_csv(&args.out, &x)?;
    print_summary(&RunSummary {
        command: "denoise-1d",
        seed: args.seed,
        penalty: args.penalty,
        shape: shape.to_string(),
        beta: args.beta,
        iterations: args.iters,
        sigma,
        alpha: args.alpha,
        lambda_unit,
        lambda,
        input: args.input.display().to_string(),
        output: args.out.display().to_string(),
    })
}

pub fn denoise_wav(args: &DenoiseWavArgs) -> Result<()> {
    let (s, sample_rate) = read_wav(&args.input)?;
    let plan = SpectrogramPlan::for_sample_rate(sample_rate)?;
    let sigma = match args.sigma {
        Some(v) => v,
        None => estimate_sigma_spectrogram(&stft(&s, &plan)?)?,
    };
    if !(sigma > 0.0) {
        bail!("noise level must be positive, got {sigma}");
    }
    let shape = speech_shape(sample_rate, args.k1, args.k2)?;
    let setup = AlphaSetup::new(shape, args.penalty, args.beta, args.iters).complex();
    let unit = solve_unit_lambda(&setup, args.alpha, args.seed)?;
    let out = denoise_speech_detailed(&s, sample_rate, &setup.config(unit)?, sigma)?;
    let signal = if args.ewp {
        let noisy: Vec<_> = out.noisy.data.iter().copied().collect();
        let pilot: Vec<_> = out.denoised.data.iter().copied().collect();
        let post = empirical_wiener_post(&noisy, &pilot, out.coefficient_sigma)?;
        let data = Array2::from_shape_vec(out.noisy.data.dim(), post)?;
        istft(&Spectrogram {
            data,
            ..out.noisy.clone()
        })?
    } else {
        out.signal
    };
    write_wav(&args.out, &signal, sample_rate)?;
    print_summary(&RunSummary {
        command: if args.ewp {
            "denoise-wav+ewp"
        } else {
            "denoise-wav"
        },
        seed: args.seed,
        penalty: args.penalty,
        shape: shape.to_string(),
        beta: args.beta,
        iterations: args.iters,
        sigma: Some(sigma),
        alpha: Some(args.alpha),
        lambda_unit: Some(unit),
        lambda: unit * out.coefficient_sigma,
        input: args.input.display().to_string(),
        output: args.out.display().to_string(),
    })
}

pub fn calibrate(args: &CalibrateArgs) -> Result<()> {
    let setup = AlphaSetup::new(args.k, args.penalty, args.beta, args.iters);
    let entry = |lambda: f64, alpha: f64| CalibrationEntry {
        kind: args.penalty,
        beta: args.beta,
        iterations: args.iters,
        k1: args.k.k1,
        k2: args.k.k2,
        lambda,
        alpha,
        n_samples: args.n_samples,
        seed: args.seed,
    };
    let entries = match args.target_alpha {
        Some(target) => {
            let options = SolveOptions {
                n_samples: args.n_samples,
                seed: args.seed,
                ..Default::default()
            };
            let sol = solve_lambda_for_alpha(target, &setup, &options)?;
            let alpha = estimate_alpha(sol.lambda, &setup, args.n_samples, args.seed)?;
            vec![entry(sol.lambda, alpha)]
        }
        None => args
            .lambdas
            .iter()
            .map(|&l| {
                Ok(entry(
                    l,
                    estimate_alpha(l, &setup, args.n_samples, args.seed)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    for e in &entries {
        println!("{}\t{:.6}\t{:.4e}", e.shape(), e.lambda, e.alpha);
    }
    let table = CalibrationTable::new(entries)?;
    let file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    table.write_csv(file)?;
    Ok(())
}

#[derive(Serialize)]
struct SureRow {
    lambda: f64,
    sure_mse: f64,
    per_sample: f64,
    divergence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    true_mse: Option<f64>,
}

pub fn sure_scan(args: &SureScanArgs) -> Result<()> {
    let kind = file_kind(&args.input)?;
    if let Some(r) = &args.reference {
        if file_kind(r)? != kind {
            bail!("--reference must have the same format as --in");
        }
    }
    if !(args.sigma > 0.0) {
        bail!("--sigma must be positive");
    }
    let unit_grid = log_grid(args.lambda_min, args.lambda_max, args.points)?;
    let options = SureOptions {
        n_probes: args.probes,
        seed: args.seed,
        ..Default::default()
    };
    let rows: Vec<SureRow> = match kind {
        FileKind::Csv => {
            let y = read_signal_csv(&args.input)?;
            let shape = args.k.unwrap_or(GroupShape::one_d(5)?);
            if !shape.is_one_d() {
                bail!("CSV input needs a 1D group shape, got {shape}");
            }
            let template = OgsTemplate::new(shape, args.penalty, args.beta, args.iters);
            let grid: Vec<f64> = unit_grid.iter().map(|l| l * args.sigma).collect();
            let scan = sure::sure_scan(&y, args.sigma, &grid, &template, &options)?;
            let clean = args.reference.as_deref().map(read_signal_csv).transpose()?;
            if clean.as_ref().is_some_and(|c| c.len() != y.len()) {
                bail!("reference length differs from input length");
            }
            scan.estimates
                .iter()
                .zip(&unit_grid)
                .map(|(e, &unit)| {
                    let true_mse = match &clean {
                        Some(c) => {
                            let x = ogs_denoise(&y, &template.config(e.lambda)?)?.estimate;
                            Some(x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum())
                        }
                        None => None,
                    };
                    Ok(SureRow {
                        lambda: unit,
                        sure_mse: e.estimated_mse,
                        per_sample: e.per_sample,
                        divergence: e.divergence,
                        true_mse,
                    })
                })
                .collect::<Result<_>>()?
        }
        FileKind::Wav => {
            let (s, sample_rate) = read_wav(&args.input)?;
            let plan = SpectrogramPlan::for_sample_rate(sample_rate)?;
            let spec = stft(&s, &plan)?;
            let shape = match args.k {
                Some(k) => k,
                None => speech_shape(sample_rate, None, 2)?,
            };
            let template = OgsTemplate::new(shape, args.penalty, args.beta, args.iters);
            let sigma_c = plan.coefficient_sigma(args.sigma);
            let grid: Vec<f64> = unit_grid.iter().map(|l| l * sigma_c).collect();
            let scan = sure_scan_2d(
                spec.data.view(),
                sigma_c / std::f64::consts::SQRT_2,
                &grid,
                &template,
                &options,
            )?;
            let clean = match &args.reference {
                Some(path) => {
                    let (c, rate) = read_wav(path)?;
                    if rate != sample_rate || c.len() != s.len() {
                        bail!("reference WAV differs from input in rate or length");
                    }
                    Some(stft(&c, &plan)?.data)
                }
                None => None,
            };
            scan.estimates
                .iter()
                .zip(&unit_grid)
                .map(|(e, &unit)| {
                    let true_mse = match &clean {
                        Some(c) => {
                            let cfg = template.config(e.lambda)?;
                            let x = ogs_core::ogs::ogs_denoise_2d(spec.data.view(), &cfg)?.estimate;
                            Some(
                                x.iter()
                                    .zip(c.iter())
                                    .map(|(a, b)| (a - b).norm_sqr())
                                    .sum(),
                            )
                        }
                        None => None,
                    };
                    Ok(SureRow {
                        lambda: unit,
                        sure_mse: e.estimated_mse,
                        per_sample: e.per_sample,
                        divergence: e.divergence,
                        true_mse,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    let mut writer = csv::Writer::from_path(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    let best = rows
        .iter()
        .min_by(|a, b| a.sure_mse.total_cmp(&b.sure_mse))
        .map(|r| r.lambda);
    println!(
        "{}",
        serde_json::json!({ "command": "sure-scan", "seed": args.seed, "argmin_lambda": best, "points": rows.len() })
    );
    Ok(())
}

pub fn benchmark(args: &BenchmarkArgs) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let cfg = BenchmarkConfig {
        seeds: (0..args.seeds).collect(),
        mode: args.mode,
        ..Default::default()
    };
    let report = benchmark_example1(&cfg)?;
    let file =
        File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    serde_json::to_writer_pretty(file, &report)?;
    for (method, snr) in &report.mean_snr_db {
        println!("{method:<10} {snr:7.2} dB");
    }
    Ok(())
}

pub fn threshold(args: &ThresholdArgs) -> Result<()> {
    let problem = ThresholdProblem::new(args.lambda, Penalty::new(args.penalty, args.a)?)?;
    println!("{}", problem.scalar_threshold(args.y));
    Ok(())
}
