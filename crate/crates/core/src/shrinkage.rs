//! Scalar and group threshold functions induced by a penalty.
//!
//! `theta(y) = argmin_x 0.5*|y - x|^2 + lambda*phi(|x|)`. Under the convexity
//! bound `a < 1/lambda` the objective is strictly convex, `theta` vanishes on
//! `|y| <= lambda` and above the threshold it is the unique root of
//! `x + lambda*phi'(x) = |y|`.

use crate::error::{OgsError, Result};
use crate::penalty::{check_convexity, Penalty, PenaltyKind};
use crate::sample::Sample;

const MAX_ROOT_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdProblem {
    lambda: f64,
    penalty: Penalty,
}

impl ThresholdProblem {
    pub fn new(lambda: f64, penalty: Penalty) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(OgsError::InvalidParameter(format!(
                "threshold must be positive and finite, got {lambda}"
            )));
        }
        check_convexity(&penalty, lambda, 1)?;
        Ok(ThresholdProblem { lambda, penalty })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn penalty(&self) -> &Penalty {
        &self.penalty
    }

    /// Minimizer of `0.5*(y - x)^2 + lambda*phi(x)`.
    pub fn scalar_threshold(&self, y: f64) -> f64 {
        let m = y.abs();
        if m <= self.lambda {
            return 0.0;
        }
        y.signum() * self.shrink_magnitude(m)
    }

    /// Right derivative of `theta` at `lambda+`.
    pub fn slope_at_threshold(&self) -> Result<f64> {
        threshold_slope(self.lambda, &self.penalty)
    }

    /// Minimizer of `0.5*||y - x||^2 + lambda*phi(||x||_2)`.
    ///
    /// The objective is rotation invariant, so the minimizer is `y` rescaled by
    /// `theta(||y||)/||y||`. Complex vectors use the norm over the moduli and
    /// are rescaled by the same real factor.
    pub fn group_threshold<T: Sample>(&self, y: &[T]) -> Result<Vec<T>> {
        if y.is_empty() {
            return Err(OgsError::Domain(
                "group threshold of an empty vector".into(),
            ));
        }
        let norm = y.iter().map(Sample::norm_sqr).sum::<f64>().sqrt();
        if norm <= self.lambda {
            return Ok(vec![T::zero(); y.len()]);
        }
        let factor = self.shrink_magnitude(norm) / norm;
        Ok(y.iter().map(|&v| v.scale(factor)).collect())
    }

    /// Root of `x + lambda*phi'(x) = m` for `m > lambda`.
    fn shrink_magnitude(&self, m: f64) -> f64 {
        let lambda = self.lambda;
        let p = &self.penalty;
        let soft = m - lambda;
        if p.kind() == PenaltyKind::Abs {
            return soft;
        }
        // phi' <= 1 puts the soft threshold at or below the root.
        let (mut lo, mut hi) = (soft, m);
        let tol = 1e-12 * m.max(1.0);
        let g = |x: f64| x + lambda * p.slope(x) - m;
        let mut x = soft;
        for _ in 0..MAX_ROOT_ITERS {
            let gx = g(x);
            if gx == 0.0 {
                return x;
            }
            if gx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= tol {
                break;
            }
            let slope = 1.0 + lambda * p.curvature(x.max(f64::MIN_POSITIVE));
            let newton = x - gx / slope;
            x = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        x
    }
}

/// `1 / (1 + lambda*phi''(0+))`, the slope of `theta` just above the threshold.
pub fn threshold_slope(lambda: f64, penalty: &Penalty) -> Result<f64> {
    let denom = 1.0 + lambda * penalty.curvature_at_zero();
    if denom <= 0.0 {
        return Err(OgsError::ConvexityViolation {
            a: penalty.a(),
            bound: 1.0 / lambda,
        });
    }
    Ok(1.0 / denom)
}

/// Elementwise soft threshold `sign(y)*max(|y| - t, 0)`.
#[inline]
pub fn soft(y: f64, t: f64) -> f64 {
    y.signum() * (y.abs() - t).max(0.0)
}

/// Elementwise hard threshold: keeps `y` when `|y| > t`.
#[inline]
pub fn hard(y: f64, t: f64) -> f64 {
    if y.abs() > t {
        y
    } else {
        0.0
    }
}
