//! Overlapping group shrinkage denoising with non-convex penalties.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod error;
pub mod ogs;
pub mod penalty;
pub mod sample;
pub mod shrinkage;
pub mod spectral;
pub mod sure;
pub mod toolkit;

pub use error::{OgsError, Result};
pub use ogs::{GroupShape, Objective, OgsConfig, OgsResult, OgsTemplate};
pub use penalty::{Penalty, PenaltyKind};
pub use sample::Sample;
