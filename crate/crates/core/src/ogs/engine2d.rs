use super::cost::cost_from_group_norms;
use super::engine1d::{apply_weights, shrink};
use super::kernel::{columns_full, columns_valid, rows_full, rows_valid};
use super::{OgsConfig, OgsResult};
use crate::error::{OgsError, Result};
use crate::sample::Sample;
use ndarray::{Array2, ArrayView2};

/// Two-dimensional OGS with `K1 x K2` rectangular groups.
///
/// Axis 0 carries `K1` and axis 1 carries `K2`. Group norms and the `r` sums
/// are separable box sums, so one iteration costs `O(N1*N2*(K1 + K2))`.
pub fn ogs_denoise_2d<T: Sample>(
    y: ArrayView2<'_, T>,
    cfg: &OgsConfig,
) -> Result<OgsResult<Array2<T>>> {
    let (n1, n2) = y.dim();
    let shape = cfg.shape();
    let (k1, k2) = (shape.k1, shape.k2);
    let iterations = cfg.iterations();
    let y = y.as_standard_layout();
    let ys = y.as_slice().expect("standard layout");
    if ys.iter().any(|v| !v.is_finite()) {
        return Err(OgsError::InvalidParameter(
            "input contains non-finite samples".into(),
        ));
    }

    let mut cost_trace = Vec::with_capacity(if cfg.tracks_cost() { iterations } else { 0 });
    let mut support_trace = Vec::with_capacity(iterations);
    if n1 == 0 || n2 == 0 {
        if cfg.tracks_cost() {
            cost_trace.resize(iterations, 0.0);
        }
        support_trace.resize(iterations, 0);
        return Ok(OgsResult {
            estimate: Array2::from_elem((n1, n2), T::zero()),
            cost_trace,
            support_size_trace: support_trace,
        });
    }

    let lambda = cfg.lambda();
    let penalty = *cfg.penalty();
    let eps = cfg.epsilon();
    let (g1, g2) = (n1 + k1 - 1, n2 + k2 - 1);

    let mut x: Vec<T> = ys.to_vec();
    let mut in_support: Vec<bool> = ys.iter().map(|v| !v.is_zero()).collect();
    let mut work = vec![0.0; n1 * n2];
    let mut column_sums = vec![0.0; g1 * n2];
    let mut groups = vec![0.0; g1 * g2];
    let mut column_r = vec![0.0; n1 * g2];

    let group_norms = |x: &[T], work: &mut [f64], column_sums: &mut [f64], groups: &mut [f64]| {
        for (w, v) in work.iter_mut().zip(x) {
            *w = v.norm_sqr();
        }
        columns_full(work, n2, k1, column_sums);
        rows_full(column_sums, n2, k2, groups);
    };

    for _ in 0..iterations {
        group_norms(&x, &mut work, &mut column_sums, &mut groups);
        apply_weights(&mut groups, &penalty);
        columns_valid(&groups, g2, k1, &mut column_r);
        rows_valid(&column_r, g2, k2, &mut work);

        let mut change = 0.0;
        let mut previous = 0.0;
        let mut support = 0usize;
        for i in 0..x.len() {
            if !in_support[i] {
                continue;
            }
            let xi = shrink(ys[i], lambda, work[i], i)?;
            if cfg.relative_tolerance().is_some() {
                change += xi.sub(x[i]).norm_sqr();
                previous += x[i].norm_sqr();
            }
            if xi.modulus() > eps {
                x[i] = xi;
                support += 1;
            } else {
                x[i] = T::zero();
                in_support[i] = false;
            }
        }
        support_trace.push(support);

        if cfg.tracks_cost() {
            group_norms(&x, &mut work, &mut column_sums, &mut groups);
            cost_trace.push(cost_from_group_norms(ys, &x, &groups, lambda, &penalty));
        }

        if let Some(tol) = cfg.relative_tolerance() {
            if previous == 0.0 || (change / previous).sqrt() < tol {
                break;
            }
        }
    }

    Ok(OgsResult {
        estimate: Array2::from_shape_vec((n1, n2), x).expect("shape preserved"),
        cost_trace,
        support_size_trace: support_trace,
    })
}
