//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use ogs_core::{PenaltyKind, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Closed-form penalty values, written out from their definitions.
pub fn phi(kind: PenaltyKind, a: f64, x: f64) -> f64 {
    let u = x.abs();
    if a == 0.0 || kind == PenaltyKind::Abs {
        return u;
    }
    match kind {
        PenaltyKind::Abs => u,
        PenaltyKind::Log => (1.0 + a * u).ln() / a,
        PenaltyKind::Atan => {
            let s3 = 3f64.sqrt();
            2.0 / (a * s3) * (((1.0 + 2.0 * a * u) / s3).atan() - std::f64::consts::PI / 6.0)
        }
        PenaltyKind::Rational => u / (1.0 + a * u / 2.0),
    }
}

/// Closed-form derivative for `u > 0`.
pub fn dphi(kind: PenaltyKind, a: f64, u: f64) -> f64 {
    match kind {
        PenaltyKind::Abs => 1.0,
        PenaltyKind::Log => 1.0 / (1.0 + a * u),
        PenaltyKind::Atan => 1.0 / (1.0 + a * u + a * a * u * u),
        PenaltyKind::Rational => 1.0 / (1.0 + a * u / 2.0).powi(2),
    }
}

pub fn random_kind(rng: &mut ChaCha8Rng) -> PenaltyKind {
    PenaltyKind::ALL[rng.random_range(0..PenaltyKind::ALL.len())]
}

pub fn random_real(rng: &mut ChaCha8Rng, n: usize, sparsity: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            if rng.random_bool(sparsity) {
                0.0
            } else {
                rng.random_range(-4.0..4.0)
            }
        })
        .collect()
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize, sparsity: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            if rng.random_bool(sparsity) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
            }
        })
        .collect()
}

/// Cost of a 1D signal by explicit enumeration of every group that touches it.
pub fn naive_cost<T: Sample>(
    y: &[T],
    x: &[T],
    lambda: f64,
    k: usize,
    kind: PenaltyKind,
    a: f64,
) -> f64 {
    let n = x.len() as isize;
    let data: f64 = y
        .iter()
        .zip(x)
        .map(|(u, v)| 0.5 * u.sub(*v).norm_sqr())
        .sum();
    let mut pen = 0.0;
    for start in -(k as isize - 1)..n {
        let mut s = 0.0;
        for j in 0..k as isize {
            let i = start + j;
            if (0..n).contains(&i) {
                s += x[i as usize].norm_sqr();
            }
        }
        pen += phi(kind, a, s.sqrt());
    }
    data + lambda * pen
}

/// Straightforward MM iteration over all samples from an arbitrary nonzero
/// starting point, with plain loops and no support bookkeeping.
pub fn naive_mm(
    y: &[f64],
    x0: &[f64],
    lambda: f64,
    k: usize,
    kind: PenaltyKind,
    a: f64,
    iters: usize,
) -> Vec<f64> {
    let n = y.len();
    let mut x = x0.to_vec();
    for _ in 0..iters {
        let mut b = vec![0.0; n + k - 1];
        for (g, bg) in b.iter_mut().enumerate() {
            let start = g as isize - (k as isize - 1);
            let mut s = 0.0;
            for j in 0..k as isize {
                let i = start + j;
                if (0..n as isize).contains(&i) {
                    s += x[i as usize] * x[i as usize];
                }
            }
            let u = s.sqrt();
            *bg = if u > 0.0 { dphi(kind, a, u) / u } else { 0.0 };
        }
        for i in 0..n {
            let r: f64 = (0..k).map(|j| b[i + k - 1 - j]).sum();
            x[i] = y[i] / (1.0 + lambda * r);
        }
    }
    x
}
