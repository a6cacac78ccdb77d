use super::kernel::{columns_full, rows_full, window_sum_full};
use super::Objective;
use crate::error::{OgsError, Result};
use crate::penalty::Penalty;
use crate::sample::Sample;
use ndarray::ArrayView2;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `F(x)` from the data and the squared norms of every group.
pub(crate) fn cost_from_group_norms<T: Sample>(
    y: &[T],
    x: &[T],
    group_norms_sq: &[f64],
    lambda: f64,
    penalty: &Penalty,
) -> f64 {
    let mut data = CompensatedSum::default();
    for (&yi, &xi) in y.iter().zip(x) {
        data.add(yi.sub(xi).norm_sqr());
    }
    let mut pen = CompensatedSum::default();
    for &g in group_norms_sq {
        if g > 0.0 {
            pen.add(penalty.value(g.sqrt()));
        }
    }
    0.5 * data.value() + lambda * pen.value()
}

/// `F(x) = 0.5*||y - x||^2 + lambda * sum_i phi(||x_{i,K}||)` over the
/// `N + K - 1` groups that intersect the signal. Requires a `1xK` shape.
pub fn ogs_cost<T: Sample>(y: &[T], x: &[T], objective: &Objective) -> Result<f64> {
    if y.len() != x.len() {
        return Err(OgsError::ShapeMismatch {
            expected: format!("{}", y.len()),
            actual: format!("{}", x.len()),
        });
    }
    if !objective.shape.is_one_d() {
        return Err(OgsError::ShapeMismatch {
            expected: "1xK group".into(),
            actual: objective.shape.to_string(),
        });
    }
    if y.is_empty() {
        return Ok(0.0);
    }
    let k = objective.shape.k2;
    let xsq: Vec<f64> = x.iter().map(Sample::norm_sqr).collect();
    let mut groups = vec![0.0; xsq.len() + k - 1];
    window_sum_full(&xsq, k, &mut groups, true);
    Ok(cost_from_group_norms(
        y,
        x,
        &groups,
        objective.lambda,
        &objective.penalty,
    ))
}

/// Two-dimensional cost over `(N1 + K1 - 1) x (N2 + K2 - 1)` groups.
pub fn ogs_cost_2d<T: Sample>(
    y: ArrayView2<'_, T>,
    x: ArrayView2<'_, T>,
    objective: &Objective,
) -> Result<f64> {
    if y.dim() != x.dim() {
        return Err(OgsError::ShapeMismatch {
            expected: format!("{:?}", y.dim()),
            actual: format!("{:?}", x.dim()),
        });
    }
    let (n1, n2) = y.dim();
    if n1 == 0 || n2 == 0 {
        return Ok(0.0);
    }
    let (k1, k2) = (objective.shape.k1, objective.shape.k2);
    let y = y.as_standard_layout();
    let x = x.as_standard_layout();
    let ys = y.as_slice().expect("standard layout");
    let xs = x.as_slice().expect("standard layout");
    let xsq: Vec<f64> = xs.iter().map(Sample::norm_sqr).collect();
    let mut cols = vec![0.0; (n1 + k1 - 1) * n2];
    columns_full(&xsq, n2, k1, &mut cols);
    let mut groups = vec![0.0; (n1 + k1 - 1) * (n2 + k2 - 1)];
    rows_full(&cols, n2, k2, &mut groups);
    Ok(cost_from_group_norms(
        ys,
        xs,
        &groups,
        objective.lambda,
        &objective.penalty,
    ))
}

/// Quadratic majorizer of `phi` tangent at `v`:
/// `q(x, v) = phi'(|v|)/(2|v|) * x^2 + phi(v) - |v|/2 * phi'(|v|)`.
pub fn majorizer_q(penalty: &Penalty, x: f64, v: f64) -> Result<f64> {
    if v == 0.0 {
        return Err(OgsError::Domain("majorizer is undefined at v = 0".into()));
    }
    let u = v.abs();
    let slope = penalty.deriv(u)?;
    Ok(slope / (2.0 * u) * x * x + penalty.value(v) - 0.5 * u * slope)
}
