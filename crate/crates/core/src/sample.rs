//! Scalar sample types that the denoisers operate on.
//!
//! OGS only ever rescales samples by a real positive factor, so the algorithms
//! are written once over [`Sample`] and instantiated for `f64` and `Complex64`.

use num_complex::Complex64;
use std::fmt::Debug;

pub trait Sample: Copy + Debug + PartialEq + Send + Sync + 'static {
    /// Number of real degrees of freedom in one sample.
    const DOF: usize;

    fn zero() -> Self;

    fn norm_sqr(&self) -> f64;

    fn modulus(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn scale(self, factor: f64) -> Self;

    fn sub(self, other: Self) -> Self;

    fn add(self, other: Self) -> Self;

    /// Real component `part` (0 = real, 1 = imaginary).
    fn part(&self, part: usize) -> f64;

    /// Adds `delta` to real component `part`.
    fn perturb(self, part: usize, delta: f64) -> Self;

    fn is_finite(&self) -> bool;

    fn is_zero(&self) -> bool {
        self.norm_sqr() == 0.0
    }
}

impl Sample for f64 {
    const DOF: usize = 1;

    #[inline]
    fn zero() -> Self {
        0.0
    }

    #[inline]
    fn norm_sqr(&self) -> f64 {
        self * self
    }

    #[inline]
    fn modulus(&self) -> f64 {
        self.abs()
    }

    #[inline]
    fn scale(self, factor: f64) -> Self {
        self * factor
    }

    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }

    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }

    #[inline]
    fn part(&self, part: usize) -> f64 {
        debug_assert_eq!(part, 0);
        *self
    }

    #[inline]
    fn perturb(self, part: usize, delta: f64) -> Self {
        debug_assert_eq!(part, 0);
        self + delta
    }

    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Sample for Complex64 {
    const DOF: usize = 2;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    #[inline]
    fn norm_sqr(&self) -> f64 {
        Complex64::norm_sqr(self)
    }

    #[inline]
    fn scale(self, factor: f64) -> Self {
        self * factor
    }

    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }

    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }

    #[inline]
    fn part(&self, part: usize) -> f64 {
        if part == 0 {
            self.re
        } else {
            self.im
        }
    }

    #[inline]
    fn perturb(self, part: usize, delta: f64) -> Self {
        if part == 0 {
            Complex64::new(self.re + delta, self.im)
        } else {
            Complex64::new(self.re, self.im + delta)
        }
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Squared Euclidean distance between two sample slices.
pub fn distance_sqr<T: Sample>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x.sub(y).norm_sqr()).sum()
}

pub fn energy<T: Sample>(a: &[T]) -> f64 {
    a.iter().map(Sample::norm_sqr).sum()
}
