use super::cost::cost_from_group_norms;
use super::kernel::{window_sum_full, window_sum_valid};
use super::{OgsConfig, OgsResult};
use crate::error::{OgsError, Result};
use crate::penalty::Penalty;
use crate::sample::Sample;

/// Buffers for one-dimensional OGS on `n` samples with groups of length `k`.
///
/// Holds the iterate, one length-`n` scratch array (squared moduli, later
/// reused for `r`), the `n + k - 1` group weights and the support mask.
#[derive(Debug)]
pub struct Workspace1d<T> {
    x: Vec<T>,
    work: Vec<f64>,
    weights: Vec<f64>,
    in_support: Vec<bool>,
    k: usize,
}

impl<T: Sample> Workspace1d<T> {
    pub fn new(n: usize, k: usize) -> Self {
        Workspace1d {
            x: vec![T::zero(); n],
            work: vec![0.0; n],
            weights: vec![0.0; n + k.max(1) - 1],
            in_support: vec![false; n],
            k: k.max(1),
        }
    }

    /// Allocated storage measured in `f64`-sized slots.
    pub fn allocated_f64_slots(&self) -> usize {
        let bytes = self.x.capacity() * std::mem::size_of::<T>()
            + (self.work.capacity() + self.weights.capacity()) * std::mem::size_of::<f64>()
            + self.in_support.capacity();
        bytes.div_ceil(std::mem::size_of::<f64>())
    }

    /// Runs OGS on `y`, reusing the buffers. The workspace must have been sized
    /// for `y.len()` and the configured group length.
    pub fn run(&mut self, y: &[T], cfg: &OgsConfig) -> Result<OgsResult<Vec<T>>> {
        let shape = cfg.shape();
        if !shape.is_one_d() {
            return Err(OgsError::ShapeMismatch {
                expected: "1xK group".into(),
                actual: shape.to_string(),
            });
        }
        let n = y.len();
        let k = shape.k2;
        if self.x.len() != n || self.k != k {
            return Err(OgsError::ShapeMismatch {
                expected: format!("workspace for n={}, k={}", self.x.len(), self.k),
                actual: format!("n={n}, k={k}"),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(OgsError::InvalidParameter(
                "input contains non-finite samples".into(),
            ));
        }
        let iterations = cfg.iterations();
        let mut cost_trace = Vec::with_capacity(if cfg.tracks_cost() { iterations } else { 0 });
        let mut support_trace = Vec::with_capacity(iterations);
        if n == 0 {
            if cfg.tracks_cost() {
                cost_trace.resize(iterations, 0.0);
            }
            support_trace.resize(iterations, 0);
            return Ok(OgsResult {
                estimate: Vec::new(),
                cost_trace,
                support_size_trace: support_trace,
            });
        }

        let lambda = cfg.lambda();
        let penalty = *cfg.penalty();
        let eps = cfg.epsilon();
        let parallel = n >= 1 << 16;

        self.x.copy_from_slice(y);
        for (s, v) in self.in_support.iter_mut().zip(y) {
            *s = !v.is_zero();
        }

        for _ in 0..iterations {
            for (w, v) in self.work.iter_mut().zip(&self.x) {
                *w = v.norm_sqr();
            }
            window_sum_full(&self.work, k, &mut self.weights, parallel);
            apply_weights(&mut self.weights, &penalty);
            // r(i) = sum_{j<k} b(i - j), written over the squared moduli
            window_sum_valid(&self.weights, k, &mut self.work, parallel);

            let mut change = 0.0;
            let mut previous = 0.0;
            let mut support = 0usize;
            for i in 0..n {
                if !self.in_support[i] {
                    continue;
                }
                let xi = shrink(y[i], lambda, self.work[i], i)?;
                if cfg.relative_tolerance().is_some() {
                    change += xi.sub(self.x[i]).norm_sqr();
                    previous += self.x[i].norm_sqr();
                }
                if xi.modulus() > eps {
                    self.x[i] = xi;
                    support += 1;
                } else {
                    self.x[i] = T::zero();
                    self.in_support[i] = false;
                }
            }
            support_trace.push(support);

            if cfg.tracks_cost() {
                for (w, v) in self.work.iter_mut().zip(&self.x) {
                    *w = v.norm_sqr();
                }
                window_sum_full(&self.work, k, &mut self.weights, parallel);
                cost_trace.push(cost_from_group_norms(
                    y,
                    &self.x,
                    &self.weights,
                    lambda,
                    &penalty,
                ));
            }

            if let Some(tol) = cfg.relative_tolerance() {
                if previous == 0.0 || (change / previous).sqrt() < tol {
                    break;
                }
            }
        }

        Ok(OgsResult {
            estimate: std::mem::take(&mut self.x),
            cost_trace,
            support_size_trace: support_trace,
        })
    }
}

/// Squared group norms in, `b = phi'(a)/a` out; all-zero groups get `b = 0`.
#[inline]
pub(crate) fn apply_weights(groups: &mut [f64], penalty: &Penalty) {
    for g in groups.iter_mut() {
        *g = if *g > 0.0 {
            penalty.weight_unchecked(g.sqrt())
        } else {
            0.0
        };
    }
}

/// `y / (1 + lambda*r)`; the denominator is at least 1 for any finite or
/// infinite `r >= 0`.
#[inline]
pub(crate) fn shrink<T: Sample>(y: T, lambda: f64, r: f64, index: usize) -> Result<T> {
    let denom = 1.0 + lambda * r;
    if !(denom >= 1.0) {
        return Err(OgsError::InternalInvariant(format!(
            "MM denominator {denom} at sample {index} (r = {r})"
        )));
    }
    Ok(y.scale(denom.recip()))
}

/// One-dimensional OGS (`1xK` groups) on real or complex samples.
pub fn ogs_denoise<T: Sample>(y: &[T], cfg: &OgsConfig) -> Result<OgsResult<Vec<T>>> {
    Workspace1d::new(y.len(), cfg.shape().k2).run(y, cfg)
}
