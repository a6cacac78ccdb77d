use crate::error::{OgsError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSparseSignal {
    pub samples: Vec<f64>,
    /// `(start, length)` of every burst, sorted by start.
    pub groups: Vec<(usize, usize)>,
}

const PLACEMENT_ATTEMPTS: usize = 1000;

/// Zero signal with `n_groups` disjoint bursts, separated by at least one
/// zero. A burst of length `L` and amplitude `A` is
/// `s * A * (0.5 + 0.5 * sin(pi * (j + 0.5) / L))` with a random sign `s`, so
/// every burst sample is nonzero.
pub fn gen_group_sparse(
    n: usize,
    n_groups: usize,
    group_len: (usize, usize),
    amplitude: (f64, f64),
    seed: u64,
) -> Result<GroupSparseSignal> {
    let (lmin, lmax) = group_len;
    if lmin == 0 || lmax < lmin {
        return Err(OgsError::InvalidParameter(format!(
            "bad group length range {lmin}..={lmax}"
        )));
    }
    if !(amplitude.0 > 0.0 && amplitude.1 >= amplitude.0) {
        return Err(OgsError::InvalidParameter(format!(
            "bad amplitude range {amplitude:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<(usize, usize)> = Vec::with_capacity(n_groups);
    for _ in 0..n_groups {
        let len = rng.random_range(lmin..=lmax);
        if len > n {
            return Err(OgsError::Infeasible(format!(
                "group of length {len} does not fit in {n}"
            )));
        }
        let placed = (0..PLACEMENT_ATTEMPTS).find_map(|_| {
            let start = rng.random_range(0..=n - len);
            let clear = groups
                .iter()
                .all(|&(s, l)| start + len < s || s + l < start);
            clear.then_some(start)
        });
        match placed {
            Some(start) => groups.push((start, len)),
            None => {
                return Err(OgsError::Infeasible(format!(
                    "could not place {n_groups} groups in {n} samples"
                )))
            }
        }
    }
    groups.sort_unstable();

    let mut samples = vec![0.0; n];
    for &(start, len) in &groups {
        let amp = rng.random_range(amplitude.0..=amplitude.1);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        for j in 0..len {
            samples[start + j] =
                sign * amp * (0.5 + 0.5 * (PI * (j as f64 + 0.5) / len as f64).sin());
        }
    }
    Ok(GroupSparseSignal { samples, groups })
}

/// Speech-like test signal: voiced syllables with a gliding fundamental in
/// 100..220 Hz, harmonics with a decaying spectral envelope, separated by
/// silences. Peak amplitude 0.5.
pub fn gen_harmonic(n: usize, sample_rate: u32, seed: u64) -> Vec<f64> {
    let fs = sample_rate as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; n];
    let mut t = (rng.random_range(0.02..0.1) * fs) as usize;
    while t < n {
        let dur = ((rng.random_range(0.12..0.3) * fs) as usize).min(n - t);
        let f0: f64 = rng.random_range(100.0..220.0);
        let glide: f64 = rng.random_range(-0.15..0.15);
        let tilt = rng.random_range(800.0..2000.0);
        let harmonics = ((0.4 * fs) / (f0 * (1.0 + glide.max(0.0)))) as usize;
        let amps: Vec<f64> = (1..=harmonics)
            .map(|h| (-(h as f64) * f0 / tilt).exp() * rng.random_range(0.5..1.0))
            .collect();
        let phases: Vec<f64> = (0..harmonics)
            .map(|_| rng.random_range(0.0..2.0 * PI))
            .collect();
        let mut phase = 0.0;
        for j in 0..dur {
            let u = j as f64 / dur as f64;
            let env = (PI * u).sin().powf(0.5);
            for (h, (a, p)) in amps.iter().zip(&phases).enumerate() {
                out[t + j] += env * a * ((h + 1) as f64 * phase + p).sin();
            }
            phase += 2.0 * PI * f0 * (1.0 + glide * u) / fs;
        }
        t += dur + (rng.random_range(0.04..0.15) * fs) as usize;
    }
    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        out.iter_mut().for_each(|v| *v *= 0.5 / peak);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseLevel {
    Sigma(f64),
    SnrDb(f64),
}

/// Adds white Gaussian noise; returns the noisy signal and the `sigma` used.
/// For a target SNR, `sigma = ||x|| / sqrt(n * 10^(snr/10))`.
pub fn add_awgn(x: &[f64], level: NoiseLevel, seed: u64) -> Result<(Vec<f64>, f64)> {
    let sigma = match level {
        NoiseLevel::Sigma(s) => {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(OgsError::InvalidParameter(format!(
                    "sigma must be >= 0, got {s}"
                )));
            }
            s
        }
        NoiseLevel::SnrDb(snr) => {
            let energy: f64 = x.iter().map(|v| v * v).sum();
            if energy == 0.0 || x.is_empty() {
                return Err(OgsError::InvalidParameter(
                    "target SNR needs a nonzero signal".into(),
                ));
            }
            (energy / (x.len() as f64 * 10f64.powf(snr / 10.0))).sqrt()
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = x
        .iter()
        .map(|v| {
            let w: f64 = StandardNormal.sample(&mut rng);
            v + sigma * w
        })
        .collect();
    Ok((y, sigma))
}

/// `10 log10(||x||^2 / ||x - estimate||^2)`; `+inf` for an exact estimate.
pub fn snr_db(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(OgsError::ShapeMismatch {
            expected: reference.len().to_string(),
            actual: estimate.len().to_string(),
        });
    }
    let signal: f64 = reference.iter().map(|v| v * v).sum();
    if signal == 0.0 {
        return Err(OgsError::InvalidParameter(
            "reference signal is zero".into(),
        ));
    }
    let err: f64 = reference
        .iter()
        .zip(estimate)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / err).log10())
}
