//! Group-sparse denoising benchmark: scalar thresholding against OGS with
//! convex and non-convex penalties on short synthetic signals.

use super::denoise::{scalar_threshold_denoise, ThresholdMode};
use super::signal::{add_awgn, gen_group_sparse, snr_db, NoiseLevel};
use crate::calibration::{solve_lambda_for_alpha, AlphaSetup, SolveOptions};
use crate::error::{OgsError, Result};
use crate::ogs::{check_minimizer_properties, ogs_denoise, GroupShape, OgsConfig};
use crate::penalty::PenaltyKind;
use crate::sure::log_grid;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    /// Best output SNR over a log grid of `lambda` (and `T`) on `[0.1, 10] sigma`.
    MaxSnr,
    /// `lambda` and `T` that reduce pure noise to `alpha * sigma`.
    Alpha(f64),
}

impl FromStr for LambdaMode {
    type Err = OgsError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "max-snr" {
            return Ok(LambdaMode::MaxSnr);
        }
        s.strip_prefix("alpha:")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|a| *a > 0.0 && *a < 1.0)
            .map(LambdaMode::Alpha)
            .ok_or_else(|| {
                OgsError::InvalidParameter(format!("mode must be max-snr or alpha:<f>, got '{s}'"))
            })
    }
}

impl fmt::Display for LambdaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaMode::MaxSnr => write!(f, "max-snr"),
            LambdaMode::Alpha(a) => write!(f, "alpha:{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub seeds: Vec<u64>,
    pub n: usize,
    pub n_groups: usize,
    pub group_len: (usize, usize),
    pub amplitude: (f64, f64),
    pub snr_db: f64,
    pub k: usize,
    pub penalties: Vec<PenaltyKind>,
    pub mode: LambdaMode,
    pub iterations: usize,
    pub grid_points: usize,
    /// Noise samples per `alpha` evaluation in alpha mode.
    pub calibration_samples: usize,
    pub calibration_seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            seeds: (0..20).collect(),
            n: 100,
            n_groups: 2,
            group_len: (10, 20),
            amplitude: (1.0, 5.0),
            snr_db: 10.0,
            k: 5,
            penalties: vec![PenaltyKind::Abs, PenaltyKind::Log, PenaltyKind::Atan],
            mode: LambdaMode::MaxSnr,
            iterations: 25,
            grid_points: 40,
            calibration_samples: 200_000,
            calibration_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSnr {
    pub snr_db: f64,
    /// Threshold or `lambda`, in absolute units.
    pub parameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub seed: u64,
    pub sigma: f64,
    pub input_snr_db: f64,
    pub methods: BTreeMap<String, MethodSnr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub config: BenchmarkConfig,
    /// `sigma`-relative parameters used in alpha mode, by method.
    pub unit_parameters: BTreeMap<String, f64>,
    pub mean_snr_db: BTreeMap<String, f64>,
    pub runs: Vec<SnrReport>,
}

pub fn method_name(kind: PenaltyKind) -> String {
    format!("ogs_{kind}")
}

fn gaussian_tail(t: f64) -> (f64, f64) {
    let pdf = (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    (pdf, 0.5 * erfc(t / std::f64::consts::SQRT_2))
}

/// Output standard deviation of scalar thresholding at `T` on `N(0, 1)` noise.
pub fn threshold_alpha(mode: ThresholdMode, t: f64) -> f64 {
    let (pdf, q) = gaussian_tail(t);
    let second_moment = match mode {
        ThresholdMode::Hard => 2.0 * (t * pdf + q),
        ThresholdMode::Soft => 2.0 * ((1.0 + t * t) * q - t * pdf),
    };
    second_moment.max(0.0).sqrt()
}

/// Threshold, in units of `sigma`, at which thresholding reduces white
/// Gaussian noise to `alpha * sigma`.
pub fn threshold_for_alpha(mode: ThresholdMode, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(OgsError::Bracketing(format!(
            "alpha {alpha} is not in (0, 1)"
        )));
    }
    let (mut lo, mut hi) = (0.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if threshold_alpha(mode, mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ogs_run(y: &[f64], lambda: f64, kind: PenaltyKind, cfg: &BenchmarkConfig) -> Result<Vec<f64>> {
    let c = OgsConfig::with_beta(lambda, GroupShape::one_d(cfg.k)?, kind, 1.0)?
        .with_iterations(cfg.iterations)?
        .with_cost_tracking(false);
    let x = ogs_denoise(y, &c)?.estimate;
    check_minimizer_properties(y, &x)?;
    Ok(x)
}

fn best_over(grid: &[f64], x: &[f64], run: impl Fn(f64) -> Result<Vec<f64>>) -> Result<MethodSnr> {
    let mut best = MethodSnr {
        snr_db: f64::NEG_INFINITY,
        parameter: f64::NAN,
    };
    for &p in grid {
        let snr = snr_db(x, &run(p)?)?;
        if snr > best.snr_db {
            best = MethodSnr {
                snr_db: snr,
                parameter: p,
            };
        }
    }
    Ok(best)
}

fn unit_parameters(cfg: &BenchmarkConfig) -> Result<BTreeMap<String, f64>> {
    let LambdaMode::Alpha(alpha) = cfg.mode else {
        return Ok(BTreeMap::new());
    };
    let mut out = BTreeMap::new();
    out.insert(
        "hard".to_string(),
        threshold_for_alpha(ThresholdMode::Hard, alpha)?,
    );
    out.insert(
        "soft".to_string(),
        threshold_for_alpha(ThresholdMode::Soft, alpha)?,
    );
    let options = SolveOptions {
        n_samples: cfg.calibration_samples,
        seed: cfg.calibration_seed,
        tolerance: 1e-3,
        ..Default::default()
    };
    let solved = cfg
        .penalties
        .par_iter()
        .map(|&kind| {
            let setup = AlphaSetup::new(GroupShape::one_d(cfg.k)?, kind, 1.0, cfg.iterations);
            Ok((
                method_name(kind),
                solve_lambda_for_alpha(alpha, &setup, &options)?.lambda,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    out.extend(solved);
    Ok(out)
}

fn run_seed(seed: u64, cfg: &BenchmarkConfig, units: &BTreeMap<String, f64>) -> Result<SnrReport> {
    let signal = gen_group_sparse(
        cfg.n,
        cfg.n_groups,
        cfg.group_len,
        cfg.amplitude,
        seed.wrapping_mul(2),
    )?;
    let x = signal.samples;
    let (y, sigma) = add_awgn(
        &x,
        NoiseLevel::SnrDb(cfg.snr_db),
        seed.wrapping_mul(2).wrapping_add(1),
    )?;
    let mut methods = BTreeMap::new();
    let grid: Vec<f64> = log_grid(0.1, 10.0, cfg.grid_points)?
        .into_iter()
        .map(|g| g * sigma)
        .collect();

    for (name, mode) in [("hard", ThresholdMode::Hard), ("soft", ThresholdMode::Soft)] {
        let thr = |t: f64| scalar_threshold_denoise(&y, t, mode);
        let m = match cfg.mode {
            LambdaMode::MaxSnr => best_over(&grid, &x, thr)?,
            LambdaMode::Alpha(_) => {
                let t = units[name] * sigma;
                MethodSnr {
                    snr_db: snr_db(&x, &thr(t)?)?,
                    parameter: t,
                }
            }
        };
        methods.insert(name.to_string(), m);
    }
    for &kind in &cfg.penalties {
        let name = method_name(kind);
        let run = |l: f64| ogs_run(&y, l, kind, cfg);
        let m = match cfg.mode {
            LambdaMode::MaxSnr => best_over(&grid, &x, run)?,
            LambdaMode::Alpha(_) => {
                let l = units[&name] * sigma;
                MethodSnr {
                    snr_db: snr_db(&x, &run(l)?)?,
                    parameter: l,
                }
            }
        };
        methods.insert(name, m);
    }
    Ok(SnrReport {
        seed,
        sigma,
        input_snr_db: snr_db(&x, &y)?,
        methods,
    })
}

/// Runs every seed independently and averages the per-method output SNR.
/// Each OGS output is checked against the sign, magnitude and
/// zero-preservation properties of a minimizer.
pub fn benchmark_example1(cfg: &BenchmarkConfig) -> Result<BenchmarkReport> {
    if cfg.seeds.is_empty() {
        return Err(OgsError::InvalidParameter(
            "at least one seed is required".into(),
        ));
    }
    let units = unit_parameters(cfg)?;
    let runs = cfg
        .seeds
        .par_iter()
        .map(|&s| run_seed(s, cfg, &units))
        .collect::<Result<Vec<_>>>()?;
    let mut mean_snr_db = BTreeMap::new();
    for name in runs[0].methods.keys() {
        let m = runs.iter().map(|r| r.methods[name].snr_db).sum::<f64>() / runs.len() as f64;
        mean_snr_db.insert(name.clone(), m);
    }
    Ok(BenchmarkReport {
        config: cfg.clone(),
        unit_parameters: units,
        mean_snr_db,
        runs,
    })
}
