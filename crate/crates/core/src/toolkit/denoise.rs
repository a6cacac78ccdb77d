use crate::error::{OgsError, Result};
use crate::sample::Sample;
use crate::shrinkage::{hard, soft};
use crate::spectral::Spectrogram;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    Soft,
    Hard,
}

pub fn scalar_threshold_denoise(
    y: &[f64],
    threshold: f64,
    mode: ThresholdMode,
) -> Result<Vec<f64>> {
    if !(threshold >= 0.0) {
        return Err(OgsError::InvalidParameter(format!(
            "threshold must be >= 0, got {threshold}"
        )));
    }
    let f = match mode {
        ThresholdMode::Soft => soft,
        ThresholdMode::Hard => hard,
    };
    Ok(y.iter().map(|&v| f(v, threshold)).collect())
}

/// `noisy * |pilot|^2 / (|pilot|^2 + sigma^2)` per coefficient, where `sigma`
/// is the noise level of one coefficient (`sqrt(E|w|^2)`).
pub fn empirical_wiener_post<T: Sample>(noisy: &[T], pilot: &[T], sigma: f64) -> Result<Vec<T>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(OgsError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if noisy.len() != pilot.len() {
        return Err(OgsError::ShapeMismatch {
            expected: noisy.len().to_string(),
            actual: pilot.len().to_string(),
        });
    }
    let s2 = sigma * sigma;
    Ok(noisy
        .iter()
        .zip(pilot)
        .map(|(y, p)| {
            let e = p.norm_sqr();
            y.scale(e / (e + s2))
        })
        .collect())
}

pub const MAD_MIN_SAMPLES: usize = 256;
const MAD_GAUSSIAN: f64 = 0.6745;

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// `median(|y - median(y)|) / 0.6745`.
pub fn estimate_sigma_mad(y: &[f64]) -> Result<f64> {
    if y.len() < MAD_MIN_SAMPLES {
        return Err(OgsError::TooFewSamples {
            got: y.len(),
            min: MAD_MIN_SAMPLES,
        });
    }
    let mut v = y.to_vec();
    let med = median(&mut v);
    let mut dev: Vec<f64> = y.iter().map(|x| (x - med).abs()).collect();
    let sigma = median(&mut dev) / MAD_GAUSSIAN;
    if sigma == 0.0 {
        log::warn!("MAD noise estimate is zero; input is constant on more than half its samples");
    }
    Ok(sigma)
}

/// Time-domain noise level from the top quarter of the spectrogram bins,
/// where speech carries little energy. Uses the MAD of the real and
/// imaginary parts, each of which has standard deviation `sigma ||w|| / sqrt 2`.
pub fn estimate_sigma_spectrogram(spec: &Spectrogram) -> Result<f64> {
    let bins = spec.plan.bins();
    let lo = bins - bins / 4;
    let parts: Vec<f64> = spec
        .data
        .slice(ndarray::s![lo..bins - 1, ..])
        .iter()
        .flat_map(|c| [c.re, c.im])
        .collect();
    let part_sigma = estimate_sigma_mad(&parts)?;
    Ok(part_sigma * std::f64::consts::SQRT_2 / spec.plan.window_norm())
}
