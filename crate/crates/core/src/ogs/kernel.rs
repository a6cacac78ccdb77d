//! K-point window sums along one axis, with zero extension.
//!
//! "Full" sums produce one value per group start `g - (k-1)`, i.e. `n + k - 1`
//! outputs; "valid" sums collapse them back to `n` outputs. Each output is
//! accumulated from `0.0` in ascending index order, so results do not depend on
//! how the work is split across threads.

use rayon::prelude::*;

const PAR_MIN: usize = 1 << 15;
const CHUNK: usize = 1 << 13;

#[inline]
fn full_range(input: &[f64], k: usize, start: usize, out: &mut [f64]) {
    let n = input.len();
    for (o, g) in out.iter_mut().zip(start..) {
        let lo = g.saturating_sub(k - 1);
        let hi = g.min(n - 1);
        let mut acc = 0.0;
        for v in &input[lo..=hi] {
            acc += v;
        }
        *o = acc;
    }
}

#[inline]
fn valid_range(input: &[f64], k: usize, start: usize, out: &mut [f64]) {
    for (o, i) in out.iter_mut().zip(start..) {
        let mut acc = 0.0;
        for v in &input[i..i + k] {
            acc += v;
        }
        *o = acc;
    }
}

/// `out[g] = sum_{j<k} input[g + j - (k-1)]`; `out.len() == input.len() + k - 1`.
pub(crate) fn window_sum_full(input: &[f64], k: usize, out: &mut [f64], parallel: bool) {
    debug_assert!(!input.is_empty() && k >= 1);
    debug_assert_eq!(out.len(), input.len() + k - 1);
    if k == 1 {
        out.copy_from_slice(input);
    } else if parallel && out.len() >= PAR_MIN {
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| full_range(input, k, c * CHUNK, chunk));
    } else {
        full_range(input, k, 0, out);
    }
}

/// `out[i] = sum_{t<k} input[i + t]`; `out.len() == input.len() - k + 1`.
pub(crate) fn window_sum_valid(input: &[f64], k: usize, out: &mut [f64], parallel: bool) {
    debug_assert_eq!(out.len() + k - 1, input.len());
    if k == 1 {
        out.copy_from_slice(input);
    } else if parallel && out.len() >= PAR_MIN {
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| valid_range(input, k, c * CHUNK, chunk));
    } else {
        valid_range(input, k, 0, out);
    }
}

/// Row-wise full sums of a row-major `rows x width` array.
pub(crate) fn rows_full(input: &[f64], width: usize, k: usize, out: &mut [f64]) {
    let out_width = width + k - 1;
    out.par_chunks_mut(out_width)
        .zip(input.par_chunks(width))
        .for_each(|(o, i)| window_sum_full(i, k, o, false));
}

pub(crate) fn rows_valid(input: &[f64], width: usize, k: usize, out: &mut [f64]) {
    let out_width = width - k + 1;
    out.par_chunks_mut(out_width)
        .zip(input.par_chunks(width))
        .for_each(|(o, i)| window_sum_valid(i, k, o, false));
}

/// Full sums down the columns of a row-major `rows x width` array.
pub(crate) fn columns_full(input: &[f64], width: usize, k: usize, out: &mut [f64]) {
    let rows = input.len() / width;
    if k == 1 {
        out.copy_from_slice(input);
        return;
    }
    out.par_chunks_mut(width).enumerate().for_each(|(g, o)| {
        let lo = g.saturating_sub(k - 1);
        let hi = g.min(rows - 1);
        o.fill(0.0);
        for r in lo..=hi {
            for (acc, v) in o.iter_mut().zip(&input[r * width..(r + 1) * width]) {
                *acc += v;
            }
        }
    });
}

pub(crate) fn columns_valid(input: &[f64], width: usize, k: usize, out: &mut [f64]) {
    if k == 1 {
        out.copy_from_slice(input);
        return;
    }
    out.par_chunks_mut(width).enumerate().for_each(|(i, o)| {
        o.fill(0.0);
        for r in i..i + k {
            for (acc, v) in o.iter_mut().zip(&input[r * width..(r + 1) * width]) {
                *acc += v;
            }
        }
    });
}
