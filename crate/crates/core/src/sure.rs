//! Monte-Carlo SURE: an unbiased estimate of `E||f(y) - x||^2` for a denoiser
//! `f` applied to `y = x + w`, `w` white Gaussian, using only `y`.
//!
//! `SURE = ||f(y) - y||^2 + 2 sigma^2 div f(y) - M sigma^2`, where `sigma` is the
//! standard deviation of each real component of the noise and `M` counts real
//! degrees of freedom (two per complex sample). The divergence is estimated by
//! finite differences along Gaussian probes. For complex data one probe
//! perturbs only the real parts and another only the imaginary parts; their
//! partial divergences add up to the full divergence.

use crate::error::{OgsError, Result};
use crate::ogs::{ogs_denoise, ogs_denoise_2d, OgsConfig, OgsTemplate};
use crate::sample::{distance_sqr, Sample};
use ndarray::{Array2, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Perturbation scale relative to `sigma` when none is given.
pub const DEFAULT_RELATIVE_DELTA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SureOptions {
    /// Finite-difference step; `None` means `DEFAULT_RELATIVE_DELTA * sigma`.
    pub delta: Option<f64>,
    pub n_probes: usize,
    pub seed: u64,
}

impl Default for SureOptions {
    fn default() -> Self {
        Self {
            delta: None,
            n_probes: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SureEstimate {
    pub lambda: f64,
    /// Estimated total squared error over all samples.
    pub estimated_mse: f64,
    /// `estimated_mse` divided by the number of samples.
    pub per_sample: f64,
    pub divergence: f64,
    /// Standard error of `divergence` across probes; zero for a single probe.
    pub divergence_std_error: f64,
    pub residual: f64,
    pub perturbation_scale: f64,
    pub n_probes: usize,
    pub seed: u64,
}

fn probe<T: Sample>(rng: &mut ChaCha8Rng, n: usize, part: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::zero().perturb(part, StandardNormal.sample(rng)))
        .collect()
}

fn inner<T: Sample>(b: &[T], d: &[T]) -> f64 {
    b.iter()
        .zip(d)
        .map(|(u, v)| (0..T::DOF).map(|p| u.part(p) * v.part(p)).sum::<f64>())
        .sum()
}

/// SURE for an arbitrary deterministic denoiser acting on a flat sample slice.
pub fn mc_sure_with<T: Sample>(
    y: &[T],
    sigma: f64,
    lambda: f64,
    options: &SureOptions,
    f: impl Fn(&[T]) -> Result<Vec<T>>,
) -> Result<SureEstimate> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(OgsError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let delta = options.delta.unwrap_or(DEFAULT_RELATIVE_DELTA * sigma);
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(OgsError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if options.n_probes == 0 {
        return Err(OgsError::InvalidParameter(
            "n_probes must be at least 1".into(),
        ));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(OgsError::InvalidParameter(
            "input contains non-finite samples".into(),
        ));
    }

    let fy = f(y)?;
    let residual = distance_sqr(&fy, y);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut samples = Vec::with_capacity(options.n_probes);
    for _ in 0..options.n_probes {
        let mut div = 0.0;
        for part in 0..T::DOF {
            let b = probe::<T>(&mut rng, y.len(), part);
            let shifted: Vec<T> = y
                .iter()
                .zip(&b)
                .map(|(v, d)| v.add(d.scale(delta)))
                .collect();
            let fs = f(&shifted)?;
            let diff: Vec<T> = fs.iter().zip(&fy).map(|(a, c)| a.sub(*c)).collect();
            div += inner(&b, &diff) / delta;
        }
        samples.push(div);
    }
    let count = samples.len() as f64;
    let divergence = samples.iter().sum::<f64>() / count;
    let divergence_std_error = if samples.len() > 1 {
        let var = samples
            .iter()
            .map(|d| (d - divergence).powi(2))
            .sum::<f64>()
            / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    let m = (y.len() * T::DOF) as f64;
    let estimated_mse = residual + 2.0 * sigma * sigma * divergence - m * sigma * sigma;
    Ok(SureEstimate {
        lambda,
        estimated_mse,
        per_sample: if y.is_empty() {
            0.0
        } else {
            estimated_mse / y.len() as f64
        },
        divergence,
        divergence_std_error,
        residual,
        perturbation_scale: delta,
        n_probes: options.n_probes,
        seed: options.seed,
    })
}

/// SURE of one-dimensional OGS with configuration `cfg`.
pub fn mc_sure<T: Sample>(
    y: &[T],
    sigma: f64,
    cfg: &OgsConfig,
    options: &SureOptions,
) -> Result<SureEstimate> {
    let cfg = (*cfg).with_cost_tracking(false);
    mc_sure_with(y, sigma, cfg.lambda(), options, |v| {
        Ok(ogs_denoise(v, &cfg)?.estimate)
    })
}

/// SURE of two-dimensional OGS with configuration `cfg`.
pub fn mc_sure_2d<T: Sample>(
    y: ArrayView2<'_, T>,
    sigma: f64,
    cfg: &OgsConfig,
    options: &SureOptions,
) -> Result<SureEstimate> {
    let cfg = (*cfg).with_cost_tracking(false);
    let dim = y.dim();
    let flat: Vec<T> = y.iter().copied().collect();
    mc_sure_with(&flat, sigma, cfg.lambda(), options, |v| {
        let arr = Array2::from_shape_vec(dim, v.to_vec()).expect("shape preserved");
        Ok(ogs_denoise_2d(arr.view(), &cfg)?
            .estimate
            .into_iter()
            .collect())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SureScan {
    pub estimates: Vec<SureEstimate>,
    pub argmin_lambda: f64,
}

/// Log-spaced grid of `points` values on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || points == 0 {
        return Err(OgsError::InvalidParameter(format!(
            "bad grid [{lo}, {hi}] x {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points).map(|i| lo * (step * i as f64).exp()).collect())
}

fn scan(grid: &[f64], point: impl Fn(f64) -> Result<SureEstimate> + Sync) -> Result<SureScan> {
    if grid.is_empty() {
        return Err(OgsError::InvalidParameter("lambda grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(OgsError::InvalidParameter(
            "lambda grid must be strictly increasing".into(),
        ));
    }
    let estimates = grid
        .par_iter()
        .map(|&l| point(l))
        .collect::<Result<Vec<_>>>()?;
    let best = estimates
        .iter()
        .min_by(|a, b| a.estimated_mse.total_cmp(&b.estimated_mse))
        .expect("non-empty grid");
    Ok(SureScan {
        argmin_lambda: best.lambda,
        estimates,
    })
}

/// SURE over a `lambda` grid for one-dimensional OGS. The penalty parameter is
/// recomputed from `beta` at every grid point; every point uses the same probes.
pub fn sure_scan<T: Sample>(
    y: &[T],
    sigma: f64,
    grid: &[f64],
    template: &OgsTemplate,
    options: &SureOptions,
) -> Result<SureScan> {
    scan(grid, |l| mc_sure(y, sigma, &template.config(l)?, options))
}

/// Two-dimensional counterpart of [`sure_scan`].
pub fn sure_scan_2d<T: Sample>(
    y: ArrayView2<'_, T>,
    sigma: f64,
    grid: &[f64],
    template: &OgsTemplate,
    options: &SureOptions,
) -> Result<SureScan> {
    scan(grid, |l| {
        mc_sure_2d(y, sigma, &template.config(l)?, options)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ogs::GroupShape;
    use crate::penalty::PenaltyKind;
    use num_complex::Complex64;
    use rand::Rng;

    fn noisy(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| if i % 10 < 3 { 4.0 } else { 0.0 } + rng.random_range(-1.0..1.0))
            .collect()
    }

    #[test]
    fn identity_denoiser_gives_m_sigma_squared() {
        let y = noisy(500, 1);
        let o = SureOptions {
            n_probes: 50,
            ..Default::default()
        };
        let e = mc_sure_with(&y, 0.7, 0.0, &o, |v| Ok(v.to_vec())).unwrap();
        assert!((e.divergence - 500.0).abs() < 5.0 * e.divergence_std_error);
        assert!((e.estimated_mse - 0.49 * (2.0 * e.divergence - 500.0)).abs() < 1e-9);
        assert!((e.estimated_mse / (500.0 * 0.49) - 1.0).abs() < 0.05);

        let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, -v)).collect();
        let e = mc_sure_with(&yc, 0.7, 0.0, &o, |v| Ok(v.to_vec())).unwrap();
        assert!((e.divergence - 1000.0).abs() < 5.0 * e.divergence_std_error);
        assert!((e.estimated_mse / (1000.0 * 0.49) - 1.0).abs() < 0.05);
    }

    #[test]
    fn zero_denoiser_gives_energy_minus_m_sigma_squared() {
        let y = noisy(300, 2);
        let e = mc_sure_with(&y, 0.5, 0.0, &SureOptions::default(), |v| {
            Ok(vec![0.0; v.len()])
        })
        .unwrap();
        let energy: f64 = y.iter().map(|v| v * v).sum();
        assert_eq!(e.divergence, 0.0);
        assert!((e.estimated_mse - (energy - 300.0 * 0.25)).abs() < 1e-9);
    }

    #[test]
    fn linear_shrinker_divergence_is_exact() {
        let y = noisy(200, 3);
        let o = SureOptions {
            n_probes: 4,
            ..Default::default()
        };
        let e = mc_sure_with(&y, 1.0, 0.0, &o, |v| {
            Ok(v.iter().map(|x| 0.3 * x).collect())
        })
        .unwrap();
        assert!(e.divergence > 0.0);
        assert!((e.divergence - 60.0).abs() < 4.0 * e.divergence_std_error + 1e-9);
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        let y = noisy(50, 4);
        let cfg = OgsConfig::with_beta(1.0, GroupShape::one_d(3).unwrap(), PenaltyKind::Atan, 1.0)
            .unwrap();
        let bad = SureOptions {
            delta: Some(0.0),
            ..Default::default()
        };
        assert!(mc_sure(&y, 1.0, &cfg, &bad).is_err());
        assert!(mc_sure(&y, 0.0, &cfg, &SureOptions::default()).is_err());
        let mut yn = y.clone();
        yn[3] = f64::NAN;
        assert!(mc_sure(&yn, 1.0, &cfg, &SureOptions::default()).is_err());
    }

    #[test]
    fn single_point_scan_is_its_own_argmin() {
        let y = noisy(100, 5);
        let t = OgsTemplate {
            shape: GroupShape::one_d(3).unwrap(),
            kind: PenaltyKind::Log,
            beta: 0.5,
            iterations: 10,
        };
        let s = sure_scan(&y, 0.6, &[0.8], &t, &SureOptions::default()).unwrap();
        assert_eq!(s.estimates.len(), 1);
        assert_eq!(s.argmin_lambda, 0.8);
        assert!(sure_scan(&y, 0.6, &[], &t, &SureOptions::default()).is_err());
        assert!(sure_scan(&y, 0.6, &[1.0, 0.5], &t, &SureOptions::default()).is_err());
    }

    #[test]
    fn scan_is_deterministic() {
        let y = noisy(120, 6);
        let t = OgsTemplate {
            shape: GroupShape::one_d(4).unwrap(),
            kind: PenaltyKind::Atan,
            beta: 1.0,
            iterations: 15,
        };
        let grid = log_grid(0.2, 2.0, 5).unwrap();
        let a = sure_scan(&y, 0.6, &grid, &t, &SureOptions::default()).unwrap();
        let b = sure_scan(&y, 0.6, &grid, &t, &SureOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.1, 10.0, 40).unwrap();
        assert_eq!(g.len(), 40);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[39] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
