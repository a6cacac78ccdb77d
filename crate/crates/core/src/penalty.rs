//! Parameterized sparsity-promoting penalties and their convexity bounds.
//!
//! Every penalty is symmetric, non-decreasing on `[0, inf)`, concave there and
//! has unit slope at `0+`. The non-convex kinds have `phi''(0+; a) = -a`, so a
//! group penalty on `K` samples keeps the total cost strictly convex while
//! `a < 1/(K * lambda)`.

use crate::error::{OgsError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PenaltyKind {
    #[serde(rename = "abs")]
    Abs,
    #[serde(rename = "log")]
    Log,
    #[serde(rename = "atan")]
    Atan,
    #[serde(rename = "rat")]
    Rational,
}

impl PenaltyKind {
    pub const ALL: [PenaltyKind; 4] = [
        PenaltyKind::Abs,
        PenaltyKind::Log,
        PenaltyKind::Atan,
        PenaltyKind::Rational,
    ];

    pub const NON_CONVEX: [PenaltyKind; 3] =
        [PenaltyKind::Log, PenaltyKind::Atan, PenaltyKind::Rational];

    pub fn as_str(&self) -> &'static str {
        match self {
            PenaltyKind::Abs => "abs",
            PenaltyKind::Log => "log",
            PenaltyKind::Atan => "atan",
            PenaltyKind::Rational => "rat",
        }
    }
}

impl fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PenaltyKind {
    type Err = OgsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "abs" => Ok(PenaltyKind::Abs),
            "log" => Ok(PenaltyKind::Log),
            "atan" => Ok(PenaltyKind::Atan),
            "rat" => Ok(PenaltyKind::Rational),
            other => Err(OgsError::InvalidPenalty(format!(
                "unknown penalty kind '{other}' (expected abs|log|atan|rat)"
            ))),
        }
    }
}

/// A penalty kind together with its shape parameter `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalty {
    kind: PenaltyKind,
    a: f64,
}

impl Penalty {
    /// `log` and `atan` need `a > 0`; `rat` accepts `a >= 0`; `abs` ignores `a`.
    pub fn new(kind: PenaltyKind, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(OgsError::InvalidPenalty(format!(
                "a must be finite, got {a}"
            )));
        }
        match kind {
            PenaltyKind::Abs => Ok(Penalty { kind, a: 0.0 }),
            PenaltyKind::Rational if a >= 0.0 => Ok(Penalty { kind, a }),
            PenaltyKind::Log | PenaltyKind::Atan if a > 0.0 => Ok(Penalty { kind, a }),
            _ => Err(OgsError::InvalidPenalty(format!(
                "{kind} penalty requires a {} 0, got {a}",
                if kind == PenaltyKind::Rational {
                    ">="
                } else {
                    ">"
                }
            ))),
        }
    }

    pub fn abs() -> Self {
        Penalty {
            kind: PenaltyKind::Abs,
            a: 0.0,
        }
    }

    /// Penalty with `a` set to the fraction `beta` of its convexity bound
    /// `1/(group_cardinality * lambda)`.
    ///
    /// `beta = 1` maps to the largest representable `a` strictly below the
    /// bound, so the resulting cost is still accepted as strictly convex.
    pub fn with_beta(
        kind: PenaltyKind,
        beta: f64,
        lambda: f64,
        group_cardinality: usize,
    ) -> Result<Self> {
        if kind == PenaltyKind::Abs {
            return Ok(Penalty::abs());
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(OgsError::InvalidParameter(format!(
                "beta must lie in [0, 1], got {beta}"
            )));
        }
        if !(lambda > 0.0) || group_cardinality == 0 {
            return Err(OgsError::InvalidParameter(format!(
                "lambda must be positive and the group non-empty (lambda={lambda}, K={group_cardinality})"
            )));
        }
        let bound = max_convex_a(lambda, group_cardinality);
        let mut a = beta * bound;
        if a >= bound {
            a = bound.next_down();
        }
        Penalty::new(kind, a)
    }

    pub fn kind(&self) -> PenaltyKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `phi(x; a)`.
    pub fn value(&self, x: f64) -> f64 {
        let u = x.abs();
        let a = self.a;
        match self.kind {
            PenaltyKind::Abs => u,
            PenaltyKind::Log => (a * u).ln_1p() / a,
            // atan((1+2au)/sqrt3) - pi/6 rewritten with the atan difference
            // identity; avoids cancellation for small a*u.
            PenaltyKind::Atan => 2.0 / (a * SQRT_3) * (SQRT_3 * a * u / (2.0 + a * u)).atan(),
            PenaltyKind::Rational => u / (1.0 + 0.5 * a * u),
        }
    }

    /// `phi'(x; a)` for `x != 0`.
    pub fn deriv(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(OgsError::Domain(
                "penalty derivative is undefined at 0".into(),
            ));
        }
        Ok(x.signum() * self.slope(x.abs()))
    }

    /// `phi'(u)` for `u > 0`, unchecked.
    #[inline]
    pub(crate) fn slope(&self, u: f64) -> f64 {
        let t = self.a * u;
        match self.kind {
            PenaltyKind::Abs => 1.0,
            PenaltyKind::Log => 1.0 / (1.0 + t),
            PenaltyKind::Atan => 1.0 / (1.0 + t + t * t),
            PenaltyKind::Rational => {
                let d = 1.0 + 0.5 * t;
                1.0 / (d * d)
            }
        }
    }

    /// `phi'(u)/u`, the only place the penalty enters the MM update.
    pub fn weight(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Err(OgsError::Domain(format!(
                "penalty weight needs u > 0, got {u}"
            )));
        }
        Ok(self.weight_unchecked(u))
    }

    #[inline]
    pub(crate) fn weight_unchecked(&self, u: f64) -> f64 {
        let t = self.a * u;
        match self.kind {
            PenaltyKind::Abs => 1.0 / u,
            PenaltyKind::Log => 1.0 / (u * (1.0 + t)),
            PenaltyKind::Atan => 1.0 / (u * (1.0 + t + t * t)),
            PenaltyKind::Rational => {
                let d = 1.0 + 0.5 * t;
                1.0 / (u * d * d)
            }
        }
    }

    /// `phi''(x; a)` for `x != 0`.
    pub fn second_deriv(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(OgsError::Domain(
                "penalty curvature is one-sided at 0".into(),
            ));
        }
        Ok(self.curvature(x.abs()))
    }

    #[inline]
    pub(crate) fn curvature(&self, u: f64) -> f64 {
        let a = self.a;
        let t = a * u;
        match self.kind {
            PenaltyKind::Abs => 0.0,
            PenaltyKind::Log => -a / ((1.0 + t) * (1.0 + t)),
            PenaltyKind::Atan => {
                let d = 1.0 + t + t * t;
                -(a + 2.0 * a * t) / (d * d)
            }
            PenaltyKind::Rational => {
                let d = 1.0 + 0.5 * t;
                -a / (d * d * d)
            }
        }
    }

    /// `phi''(0+; a)`: `-a` for the non-convex kinds, `0` for `abs`.
    pub fn curvature_at_zero(&self) -> f64 {
        match self.kind {
            PenaltyKind::Abs => 0.0,
            _ => -self.a,
        }
    }
}

/// Exclusive upper bound on `a` keeping the cost strictly convex.
pub fn max_convex_a(lambda: f64, group_cardinality: usize) -> f64 {
    1.0 / (group_cardinality as f64 * lambda)
}

/// `phi''(0+) > -1/(K * lambda)`; always true for `abs`.
pub fn is_strictly_convex(penalty: &Penalty, lambda: f64, group_cardinality: usize) -> bool {
    if penalty.kind == PenaltyKind::Abs {
        return true;
    }
    penalty.curvature_at_zero() > -max_convex_a(lambda, group_cardinality)
}

pub(crate) fn check_convexity(
    penalty: &Penalty,
    lambda: f64,
    group_cardinality: usize,
) -> Result<()> {
    if is_strictly_convex(penalty, lambda, group_cardinality) {
        Ok(())
    } else {
        Err(OgsError::ConvexityViolation {
            a: penalty.a,
            bound: max_convex_a(lambda, group_cardinality),
        })
    }
}
