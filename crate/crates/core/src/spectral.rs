//! Short-time Fourier analysis and synthesis with 50% overlap, and the speech
//! enhancement pipeline `istft(ogs(stft(s)))`.
//!
//! The window is a square-root periodic Hann window used for both analysis and
//! synthesis, so `w(n)^2 + w(n + L/2)^2 = 1`. The transform is unnormalized:
//! white noise of standard deviation `sigma` gives complex coefficients with
//! `E|X|^2 = sigma^2 ||w||^2`.

use crate::error::{OgsError, Result};
use crate::ogs::{ogs_denoise_2d, OgsConfig};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Frame duration in seconds.
pub const FRAME_SECONDS: f64 = 0.032;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrogramPlan {
    frame_len: usize,
    hop: usize,
    window: Vec<f64>,
}

impl SpectrogramPlan {
    /// Plan with frame length `frame_len` (even, at least 2) and hop `frame_len/2`.
    pub fn new(frame_len: usize) -> Result<Self> {
        if frame_len < 2 || !frame_len.is_multiple_of(2) {
            return Err(OgsError::InvalidParameter(format!(
                "frame length must be even and >= 2, got {frame_len}"
            )));
        }
        let window = (0..frame_len)
            .map(|n| (std::f64::consts::PI * n as f64 / frame_len as f64).sin())
            .collect();
        Ok(Self {
            frame_len,
            hop: frame_len / 2,
            window,
        })
    }

    /// 32 ms frames rounded to an even sample count: 512 at 16 kHz, 256 at 8 kHz.
    pub fn for_sample_rate(sample_rate: u32) -> Result<Self> {
        let len = (FRAME_SECONDS * sample_rate as f64 / 2.0).round() as usize * 2;
        Self::new(len)
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn bins(&self) -> usize {
        self.frame_len / 2 + 1
    }

    pub fn window(&self) -> &[f64] {
        &self.window
    }

    pub fn window_norm(&self) -> f64 {
        self.window.iter().map(|w| w * w).sum::<f64>().sqrt()
    }

    /// Largest deviation of `w(n)^2 + w(n + hop)^2` from one.
    pub fn cola_error(&self) -> f64 {
        (0..self.hop)
            .map(|n| (self.window[n].powi(2) + self.window[n + self.hop].powi(2) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Standard deviation of a complex coefficient, `sqrt(E|X|^2)`, for
    /// time-domain white noise of standard deviation `sigma`.
    pub fn coefficient_sigma(&self, sigma: f64) -> f64 {
        sigma * self.window_norm()
    }

    /// Frame count for a signal of `n` samples: enough frames that every
    /// sample lies under two windows.
    pub fn frame_count(&self, n: usize) -> usize {
        (n.max(1) - 1) / self.hop + 2
    }
}

/// Half spectrum, `bins x frames`, with the length of the analysed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub data: Array2<Complex64>,
    pub plan: SpectrogramPlan,
    pub signal_len: usize,
}

pub fn stft(s: &[f64], plan: &SpectrogramPlan) -> Result<Spectrogram> {
    if s.is_empty() {
        return Err(OgsError::InvalidParameter(
            "cannot analyse an empty signal".into(),
        ));
    }
    let (len, hop) = (plan.frame_len, plan.hop);
    let frames = plan.frame_count(s.len());
    let mut padded = vec![0.0; (frames + 1) * hop];
    padded[hop..hop + s.len()].copy_from_slice(s);

    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(len);
    let columns: Vec<Vec<Complex64>> = (0..frames)
        .into_par_iter()
        .map(|f| {
            let mut buf: Vec<Complex64> = padded[f * hop..f * hop + len]
                .iter()
                .zip(&plan.window)
                .map(|(x, w)| Complex64::new(x * w, 0.0))
                .collect();
            fft.process(&mut buf);
            buf.truncate(plan.bins());
            buf
        })
        .collect();

    let data = Array2::from_shape_fn((plan.bins(), frames), |(k, f)| columns[f][k]);
    Ok(Spectrogram {
        data,
        plan: plan.clone(),
        signal_len: s.len(),
    })
}

pub fn istft(spec: &Spectrogram) -> Result<Vec<f64>> {
    let plan = &spec.plan;
    let (len, hop, bins) = (plan.frame_len, plan.hop, plan.bins());
    let frames = plan.frame_count(spec.signal_len);
    if spec.data.dim() != (bins, frames) {
        return Err(OgsError::ShapeMismatch {
            expected: format!("{bins}x{frames}"),
            actual: format!("{}x{}", spec.data.nrows(), spec.data.ncols()),
        });
    }

    let ifft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_inverse(len);
    let blocks: Vec<Vec<f64>> = (0..frames)
        .into_par_iter()
        .map(|f| {
            let col = spec.data.column(f);
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for k in 0..bins {
                buf[k] = col[k];
            }
            for k in 1..len - bins + 1 {
                buf[len - k] = col[k].conj();
            }
            ifft.process(&mut buf);
            buf.iter()
                .zip(&plan.window)
                .map(|(c, w)| c.re / len as f64 * w)
                .collect()
        })
        .collect();

    let total = (frames + 1) * hop;
    let mut out = vec![0.0; total];
    let mut norm = vec![0.0; total];
    for (f, block) in blocks.iter().enumerate() {
        for (n, v) in block.iter().enumerate() {
            out[f * hop + n] += v;
            norm[f * hop + n] += plan.window[n] * plan.window[n];
        }
    }
    Ok((hop..hop + spec.signal_len)
        .map(|i| out[i] / norm[i])
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeechOutput {
    pub signal: Vec<f64>,
    pub noisy: Spectrogram,
    pub denoised: Spectrogram,
    /// Complex coefficient noise level the configuration was scaled by.
    pub coefficient_sigma: f64,
}

/// Denoises `s` by two-dimensional OGS on its spectrogram, axis 0 being
/// frequency (`k1`) and axis 1 time (`k2`).
///
/// `cfg` is expressed for unit noise: `lambda` in units of the coefficient
/// noise level. It is rescaled by `sigma * ||w||` before use.
pub fn denoise_speech_detailed(
    s: &[f64],
    sample_rate: u32,
    cfg: &OgsConfig,
    sigma: f64,
) -> Result<SpeechOutput> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(OgsError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let plan = SpectrogramPlan::for_sample_rate(sample_rate)?;
    let noisy = stft(s, &plan)?;
    let coefficient_sigma = plan.coefficient_sigma(sigma);
    let scaled = cfg.scaled(coefficient_sigma)?.with_cost_tracking(false);
    let data = ogs_denoise_2d(noisy.data.view(), &scaled)?.estimate;
    let denoised = Spectrogram {
        data,
        plan: plan.clone(),
        signal_len: s.len(),
    };
    let signal = istft(&denoised)?;
    Ok(SpeechOutput {
        signal,
        noisy,
        denoised,
        coefficient_sigma,
    })
}

pub fn denoise_speech(
    s: &[f64],
    sample_rate: u32,
    cfg: &OgsConfig,
    sigma: f64,
) -> Result<Vec<f64>> {
    Ok(denoise_speech_detailed(s, sample_rate, cfg, sigma)?.signal)
}
