//! Noise-level suppression: how much OGS attenuates pure white Gaussian noise,
//! and the inverse problem of choosing `lambda` for a target attenuation.
//!
//! `alpha(lambda, K, phi)` is the standard deviation of the OGS output divided by
//! the standard deviation of the input noise. Since OGS is positively
//! homogeneous when `lambda` scales with `sigma`, all tables are produced at
//! `sigma = 1` and `lambda` is in units of `sigma`.
//!
//! Noise is drawn from `ChaCha8Rng::seed_from_u64(seed)` through the ziggurat
//! sampler of `rand_distr::StandardNormal`.

use crate::error::{OgsError, Result};
use crate::ogs::{ogs_denoise_2d, GroupShape, OgsConfig, Workspace1d};
use crate::penalty::PenaltyKind;
use crate::sample::Sample;
use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Smallest sample count accepted by [`estimate_alpha`].
pub const MIN_SAMPLES: usize = 10_000;

/// Row count of the noise field used for two-dimensional group shapes.
pub const FIELD_ROWS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NoiseDomain {
    #[default]
    Real,
    /// Circular complex noise with `E|z|^2 = 1`.
    Complex,
}

/// Everything `alpha` depends on apart from `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSetup {
    pub shape: GroupShape,
    pub kind: PenaltyKind,
    pub beta: f64,
    pub iterations: usize,
    pub domain: NoiseDomain,
}

impl AlphaSetup {
    pub fn new(shape: GroupShape, kind: PenaltyKind, beta: f64, iterations: usize) -> Self {
        Self {
            shape,
            kind,
            beta,
            iterations,
            domain: NoiseDomain::Real,
        }
    }

    pub fn complex(mut self) -> Self {
        self.domain = NoiseDomain::Complex;
        self
    }

    pub fn config(&self, lambda: f64) -> Result<OgsConfig> {
        Ok(
            OgsConfig::with_beta(lambda, self.shape, self.kind, self.beta)?
                .with_iterations(self.iterations)?
                .with_cost_tracking(false),
        )
    }
}

fn gaussian_field<T: Sample>(
    n: usize,
    rng: &mut ChaCha8Rng,
    draw: impl Fn(&mut ChaCha8Rng) -> T,
) -> Vec<T> {
    (0..n).map(|_| draw(rng)).collect()
}

fn draw_real(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn draw_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Root-mean-square deviation from the mean, over all samples.
fn spread<'a, T: Sample>(values: impl Iterator<Item = &'a T> + Clone) -> f64 {
    let mut count = 0usize;
    let mut mean = [0.0; 2];
    for v in values.clone() {
        for (p, m) in mean.iter_mut().enumerate().take(T::DOF) {
            *m += v.part(p);
        }
        count += 1;
    }
    if count == 0 {
        return 0.0;
    }
    mean.iter_mut().for_each(|m| *m /= count as f64);
    let mut acc = 0.0;
    for v in values {
        for (p, m) in mean.iter().enumerate().take(T::DOF) {
            let d = v.part(p) - m;
            acc += d * d;
        }
    }
    (acc / count as f64).sqrt()
}

fn alpha_for<T: Sample>(
    lambda: f64,
    setup: &AlphaSetup,
    n_samples: usize,
    seed: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> T,
) -> Result<f64> {
    let cfg = setup.config(lambda)?;
    let (k1, k2) = (setup.shape.k1, setup.shape.k2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if setup.shape.is_one_d() {
        let noise = gaussian_field(n_samples, &mut rng, draw);
        let mut ws = Workspace1d::new(n_samples, k2);
        let out = ws.run(&noise, &cfg)?.estimate;
        let inner = &out[k2 - 1..n_samples - (k2 - 1)];
        return Ok(spread(inner.iter()));
    }
    let rows = FIELD_ROWS.max(4 * k1);
    let cols = n_samples.div_ceil(rows);
    let noise = Array2::from_shape_vec((rows, cols), gaussian_field(rows * cols, &mut rng, draw))
        .expect("field size");
    let out = ogs_denoise_2d(noise.view(), &cfg)?.estimate;
    let inner = out.slice(ndarray::s![
        k1 - 1..rows - (k1 - 1),
        k2 - 1..cols - (k2 - 1)
    ]);
    Ok(spread(inner.iter()))
}

/// Monte-Carlo attenuation factor of OGS on unit-variance white Gaussian noise.
///
/// One dimensional shapes use a single array of `n_samples`; two dimensional
/// shapes use a `FIELD_ROWS x ceil(n_samples / FIELD_ROWS)` field. Borders of
/// width `K - 1` are left out of the standard deviation.
pub fn estimate_alpha(lambda: f64, setup: &AlphaSetup, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples < MIN_SAMPLES {
        return Err(OgsError::TooFewSamples {
            got: n_samples,
            min: MIN_SAMPLES,
        });
    }
    if n_samples <= 4 * setup.shape.k2 {
        return Err(OgsError::TooFewSamples {
            got: n_samples,
            min: 4 * setup.shape.k2 + 1,
        });
    }
    match setup.domain {
        NoiseDomain::Real => alpha_for(lambda, setup, n_samples, seed, draw_real),
        NoiseDomain::Complex => alpha_for(lambda, setup, n_samples, seed, draw_complex),
    }
}

/// Expresses a `sigma`-relative regularization parameter in absolute units.
pub fn scale_lambda_for_sigma(lambda_unit: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(OgsError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    Ok(lambda_unit * sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub kind: PenaltyKind,
    pub beta: f64,
    pub iterations: usize,
    pub k1: usize,
    pub k2: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl CalibrationEntry {
    pub fn shape(&self) -> GroupShape {
        GroupShape {
            k1: self.k1,
            k2: self.k2,
        }
    }
}

/// Calibration entries for one penalty and iteration count, sorted by
/// `(k1, k2, lambda)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalibrationTable {
    entries: Vec<CalibrationEntry>,
}

impl CalibrationTable {
    /// Sorts the entries and verifies that `alpha` strictly decreases with
    /// `lambda` for every group shape.
    pub fn new(mut entries: Vec<CalibrationEntry>) -> Result<Self> {
        for e in &entries {
            if !(e.lambda > 0.0) || !(e.alpha > 0.0 && e.alpha <= 1.0) {
                return Err(OgsError::InvalidParameter(format!(
                    "entry {}x{} lambda={} alpha={} out of range",
                    e.k1, e.k2, e.lambda, e.alpha
                )));
            }
        }
        entries.sort_by(|a, b| {
            (a.k1, a.k2)
                .cmp(&(b.k1, b.k2))
                .then(a.lambda.total_cmp(&b.lambda))
        });
        for w in entries.windows(2) {
            if (w[0].k1, w[0].k2) == (w[1].k1, w[1].k2) && w[1].alpha >= w[0].alpha {
                return Err(OgsError::NonMonotoneTable(format!(
                    "{}x{}: alpha({}) = {} but alpha({}) = {}",
                    w[0].k1, w[0].k2, w[0].lambda, w[0].alpha, w[1].lambda, w[1].alpha
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[CalibrationEntry] {
        &self.entries
    }

    pub fn for_shape(&self, shape: GroupShape) -> impl Iterator<Item = &CalibrationEntry> {
        self.entries.iter().filter(move |e| e.shape() == shape)
    }

    /// `lambda` for `target_alpha` by linear interpolation against `log(alpha)`.
    pub fn interpolate_lambda(&self, shape: GroupShape, target_alpha: f64) -> Result<f64> {
        let rows: Vec<&CalibrationEntry> = self.for_shape(shape).collect();
        if rows.is_empty() {
            return Err(OgsError::Bracketing(format!(
                "no entries for group shape {shape}"
            )));
        }
        if !(target_alpha > 0.0) {
            return Err(OgsError::Bracketing(format!(
                "target alpha {target_alpha} must be positive"
            )));
        }
        let t = target_alpha.ln();
        for w in rows.windows(2) {
            let (hi, lo) = (w[0].alpha.ln(), w[1].alpha.ln());
            if t <= hi && t >= lo {
                let f = (hi - t) / (hi - lo);
                return Ok(w[0].lambda + f * (w[1].lambda - w[0].lambda));
            }
        }
        if rows.len() == 1 && rows[0].alpha == target_alpha {
            return Ok(rows[0].lambda);
        }
        Err(OgsError::Bracketing(format!(
            "target alpha {target_alpha} outside the table range for {shape}"
        )))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for e in &self.entries {
            w.serialize(e).map_err(|e| OgsError::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| OgsError::Io(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let entries = r
            .deserialize()
            .collect::<std::result::Result<Vec<CalibrationEntry>, _>>()
            .map_err(|e| OgsError::Io(e.to_string()))?;
        Self::new(entries)
    }
}

#[rustfmt::skip]
const REFERENCE_ROWS: [(usize, usize, [f64; 5], [f64; 5]); 16] = [
    (1, 1, [4.25, 4.59, 4.93, 5.27, 5.61], [1.00e-2, 4.33e-3, 1.51e-3, 4.05e-4, 1.00e-4]),
    (1, 2, [2.14, 2.31, 2.48, 2.64, 2.81], [1.00e-2, 4.35e-3, 1.49e-3, 3.99e-4, 1.00e-4]),
    (1, 3, [1.45, 1.56, 1.68, 1.79, 1.91], [1.00e-2, 4.52e-3, 1.56e-3, 4.06e-4, 1.00e-4]),
    (1, 4, [1.11, 1.20, 1.29, 1.38, 1.47], [1.00e-2, 4.47e-3, 1.58e-3, 4.11e-4, 1.00e-4]),
    (1, 5, [0.91, 0.98, 1.05, 1.13, 1.20], [1.00e-2, 4.37e-3, 1.55e-3, 4.07e-4, 1.00e-4]),
    (2, 2, [1.08, 1.16, 1.24, 1.33, 1.41], [1.00e-2, 4.37e-3, 1.47e-3, 3.95e-4, 1.00e-4]),
    (2, 3, [0.73, 0.79, 0.85, 0.90, 0.96], [1.00e-2, 4.41e-3, 1.49e-3, 3.96e-4, 1.00e-4]),
    (2, 4, [0.56, 0.61, 0.65, 0.70, 0.74], [1.00e-2, 4.18e-3, 1.44e-3, 3.91e-4, 1.00e-4]),
    (2, 5, [0.47, 0.50, 0.54, 0.58, 0.61], [1.00e-2, 3.89e-3, 1.33e-3, 3.74e-4, 1.00e-4]),
    (3, 3, [0.50, 0.54, 0.58, 0.62, 0.66], [1.00e-2, 4.11e-3, 1.38e-3, 3.81e-4, 1.00e-4]),
    (3, 4, [0.40, 0.43, 0.46, 0.49, 0.51], [1.00e-2, 3.57e-3, 1.19e-3, 3.51e-4, 1.00e-4]),
    (3, 5, [0.34, 0.36, 0.39, 0.41, 0.43], [1.00e-2, 3.26e-3, 1.04e-3, 3.23e-4, 1.00e-4]),
    (4, 4, [0.33, 0.35, 0.37, 0.39, 0.41], [1.00e-2, 3.24e-3, 1.02e-3, 3.16e-4, 1.00e-4]),
    (4, 5, [0.29, 0.30, 0.32, 0.33, 0.35], [1.00e-2, 3.09e-3, 9.61e-4, 3.04e-4, 1.00e-4]),
    (5, 5, [0.25, 0.26, 0.28, 0.29, 0.30], [1.00e-2, 3.05e-3, 9.44e-4, 3.01e-4, 1.00e-4]),
    (2, 8, [0.33, 0.35, 0.37, 0.39, 0.41], [1.00e-2, 3.33e-3, 1.05e-3, 3.22e-4, 1.00e-4]),
];

/// Published reference values for the atan penalty at `beta = 1` with 25
/// iterations on real noise. `n_samples` and `seed` are zero for these rows.
pub fn reference_table() -> CalibrationTable {
    let entries = REFERENCE_ROWS
        .iter()
        .flat_map(|&(k1, k2, lambdas, alphas)| {
            lambdas
                .into_iter()
                .zip(alphas)
                .map(move |(lambda, alpha)| CalibrationEntry {
                    kind: PenaltyKind::Atan,
                    beta: 1.0,
                    iterations: 25,
                    k1,
                    k2,
                    lambda,
                    alpha,
                    n_samples: 0,
                    seed: 0,
                })
        })
        .collect();
    CalibrationTable::new(entries).expect("reference table is monotone")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stop once `hi / lo - 1` of the bracket drops below this.
    pub tolerance: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Seed the search from [`reference_table`] when it covers the setup.
    pub use_reference: bool,
    /// Initial bracket is `[guess / spread, guess * spread]`.
    pub initial_spread: f64,
    pub max_evaluations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            n_samples: 100_000,
            seed: 0,
            use_reference: true,
            initial_spread: 1.1,
            max_evaluations: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaSolution {
    pub lambda: f64,
    /// Starting guess, from the reference table when available.
    pub initial_guess: f64,
    pub bracket: (f64, f64),
    /// Every `(lambda, alpha)` evaluated, in order.
    pub evaluations: Vec<(f64, f64)>,
}

fn reference_guess(setup: &AlphaSetup, target: f64) -> Option<f64> {
    if setup.kind != PenaltyKind::Atan
        || setup.beta != 1.0
        || setup.iterations != 25
        || setup.domain != NoiseDomain::Real
    {
        return None;
    }
    reference_table()
        .interpolate_lambda(setup.shape, target)
        .ok()
}

/// Finds `lambda` with `alpha(lambda) = target_alpha` by geometric bisection.
///
/// Every evaluation reuses `options.seed`, so the bisection runs on one fixed
/// noise realization, for which `alpha` is monotone in `lambda`.
pub fn solve_lambda_for_alpha(
    target_alpha: f64,
    setup: &AlphaSetup,
    options: &SolveOptions,
) -> Result<LambdaSolution> {
    if !(target_alpha > 0.0 && target_alpha < 1.0) {
        return Err(OgsError::Bracketing(format!(
            "target alpha {target_alpha} is not in (0, 1)"
        )));
    }
    if !(options.tolerance > 0.0) || !(options.initial_spread > 1.0) {
        return Err(OgsError::InvalidParameter(
            "tolerance must be > 0 and spread > 1".into(),
        ));
    }
    let guess = if options.use_reference {
        reference_guess(setup, target_alpha)
    } else {
        None
    }
    .unwrap_or(1.0);

    let mut evaluations = Vec::new();
    let mut eval = |lambda: f64| -> Result<f64> {
        if evaluations.len() >= options.max_evaluations {
            return Err(OgsError::Bracketing(format!(
                "no bracket for alpha {target_alpha} within {} evaluations",
                options.max_evaluations
            )));
        }
        let alpha = estimate_alpha(lambda, setup, options.n_samples, options.seed)?;
        evaluations.push((lambda, alpha));
        Ok(alpha)
    };

    let (mut lo, mut hi) = (
        guess / options.initial_spread,
        guess * options.initial_spread,
    );
    while eval(lo)? <= target_alpha {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-12 {
            return Err(OgsError::Bracketing(format!(
                "alpha stays below {target_alpha} as lambda -> 0"
            )));
        }
    }
    while eval(hi)? > target_alpha {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(OgsError::Bracketing(format!(
                "alpha stays above {target_alpha} as lambda grows"
            )));
        }
    }
    while hi / lo - 1.0 > options.tolerance {
        let mid = (lo * hi).sqrt();
        if eval(mid)? > target_alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(LambdaSolution {
        lambda: (lo * hi).sqrt(),
        initial_guess: guess,
        bracket: (lo, hi),
        evaluations,
    })
}
