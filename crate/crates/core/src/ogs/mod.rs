//! Overlapping group shrinkage (OGS) by majorization-minimization.
//!
//! The cost is `F(x) = 0.5*||y - x||^2 + lambda * sum_i phi(||x_{i,K}||_2; a)`
//! over every fully-overlapping group that touches the signal, with samples
//! outside the signal taken as zero. Each MM step rescales `y` by the real
//! factor `1/(1 + lambda*r)`, where `r` is a double K-point window sum with the
//! penalty weight `phi'(u)/u` applied between the two sums.

mod certify;
mod cost;
mod engine1d;
mod engine2d;
pub(crate) mod kernel;

pub use certify::{check_minimizer_properties, optimality_check, optimality_check_2d};
pub use cost::{majorizer_q, ogs_cost, ogs_cost_2d};
pub use engine1d::{ogs_denoise, Workspace1d};
pub use engine2d::ogs_denoise_2d;

use crate::error::{OgsError, Result};
use crate::penalty::{check_convexity, Penalty, PenaltyKind};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_ITERATIONS: usize = 25;
pub const DEFAULT_EPSILON: f64 = 1e-16;

/// Group extent: `k1` along axis 0 (spectral), `k2` along axis 1 (temporal).
/// One-dimensional groups of length `K` are `1 x K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    pub k1: usize,
    pub k2: usize,
}

impl GroupShape {
    pub fn new(k1: usize, k2: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(OgsError::InvalidParameter(format!(
                "group extents must be positive, got {k1}x{k2}"
            )));
        }
        Ok(GroupShape { k1, k2 })
    }

    pub fn one_d(k: usize) -> Result<Self> {
        GroupShape::new(1, k)
    }

    pub fn cardinality(&self) -> usize {
        self.k1 * self.k2
    }

    pub fn is_one_d(&self) -> bool {
        self.k1 == 1
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.k1, self.k2)
    }
}

/// Accepts `K` (one-dimensional, `1xK`) or `K1xK2`.
impl FromStr for GroupShape {
    type Err = OgsError;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| OgsError::InvalidParameter(format!("bad group shape '{s}'")))
        };
        match s.split_once(['x', 'X']) {
            Some((a, b)) => GroupShape::new(parse(a)?, parse(b)?),
            None => GroupShape::one_d(parse(s)?),
        }
    }
}

/// The cost function parameters, without any convexity requirement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub lambda: f64,
    pub shape: GroupShape,
    pub penalty: Penalty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OgsConfig {
    objective: Objective,
    iterations: usize,
    epsilon: f64,
    track_cost: bool,
    rel_tol: Option<f64>,
}

impl OgsConfig {
    /// Rejects any `(lambda, shape, penalty)` for which the cost is not
    /// strictly convex, i.e. `a >= 1/(K1*K2*lambda)`.
    pub fn new(lambda: f64, shape: GroupShape, penalty: Penalty) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(OgsError::InvalidParameter(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        check_convexity(&penalty, lambda, shape.cardinality())?;
        Ok(OgsConfig {
            objective: Objective {
                lambda,
                shape,
                penalty,
            },
            iterations: DEFAULT_ITERATIONS,
            epsilon: DEFAULT_EPSILON,
            track_cost: true,
            rel_tol: None,
        })
    }

    /// `a = beta / (K1*K2*lambda)`.
    pub fn with_beta(lambda: f64, shape: GroupShape, kind: PenaltyKind, beta: f64) -> Result<Self> {
        let penalty = Penalty::with_beta(kind, beta, lambda, shape.cardinality())?;
        OgsConfig::new(lambda, shape, penalty)
    }

    /// The configuration for data scaled by `factor`: `lambda * factor` and
    /// `a / factor`, so that the output scales by `factor` as well.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(OgsError::InvalidParameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let lambda = self.lambda() * factor;
        let p = self.penalty();
        let mut a = p.a() / factor;
        let bound = crate::penalty::max_convex_a(lambda, self.shape().cardinality());
        if p.kind() != PenaltyKind::Abs && a >= bound {
            a = bound.next_down();
        }
        let mut cfg = OgsConfig::new(lambda, self.shape(), Penalty::new(p.kind(), a)?)?;
        cfg.iterations = self.iterations;
        cfg.epsilon = self.epsilon;
        cfg.track_cost = self.track_cost;
        cfg.rel_tol = self.rel_tol;
        Ok(cfg)
    }

    pub fn with_iterations(mut self, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(OgsError::InvalidParameter("iterations must be >= 1".into()));
        }
        self.iterations = iterations;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(OgsError::InvalidParameter(format!(
                "support floor must be positive, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Records `F(x)` after every iteration (one extra pass per iteration).
    pub fn with_cost_tracking(mut self, on: bool) -> Self {
        self.track_cost = on;
        self
    }

    /// Stops early once `||x_{k+1} - x_k|| / ||x_k|| < tol`.
    pub fn with_relative_tolerance(mut self, tol: Option<f64>) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn lambda(&self) -> f64 {
        self.objective.lambda
    }

    pub fn shape(&self) -> GroupShape {
        self.objective.shape
    }

    pub fn penalty(&self) -> &Penalty {
        &self.objective.penalty
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tracks_cost(&self) -> bool {
        self.track_cost
    }

    pub fn relative_tolerance(&self) -> Option<f64> {
        self.rel_tol
    }
}

/// Everything in an [`OgsConfig`] except `lambda`, with the penalty given as
/// the fraction `beta` of its convexity bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OgsTemplate {
    pub shape: GroupShape,
    pub kind: PenaltyKind,
    pub beta: f64,
    pub iterations: usize,
}

impl OgsTemplate {
    pub fn new(shape: GroupShape, kind: PenaltyKind, beta: f64, iterations: usize) -> Self {
        Self {
            shape,
            kind,
            beta,
            iterations,
        }
    }

    pub fn config(&self, lambda: f64) -> Result<OgsConfig> {
        OgsConfig::with_beta(lambda, self.shape, self.kind, self.beta)?
            .with_iterations(self.iterations)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OgsResult<S> {
    pub estimate: S,
    /// `F(x)` after each iteration; empty when cost tracking is off.
    pub cost_trace: Vec<f64>,
    /// `|S|` after each iteration.
    pub support_size_trace: Vec<usize>,
}

impl<S> OgsResult<S> {
    pub fn iterations_run(&self) -> usize {
        self.support_size_trace.len()
    }
}
