use super::cost::{ogs_cost, ogs_cost_2d};
use super::Objective;
use crate::error::{OgsError, Result};
use crate::sample::Sample;
use ndarray::{Array2, ArrayView2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Checks the sign, magnitude and zero-preservation properties every OGS
/// output must have relative to its input.
pub fn check_minimizer_properties<T: Sample>(y: &[T], x: &[T]) -> Result<()> {
    if y.len() != x.len() {
        return Err(OgsError::ShapeMismatch {
            expected: y.len().to_string(),
            actual: x.len().to_string(),
        });
    }
    for (i, (yi, xi)) in y.iter().zip(x).enumerate() {
        if yi.is_zero() && !xi.is_zero() {
            return Err(OgsError::InternalInvariant(format!(
                "sample {i}: zero input but nonzero output"
            )));
        }
        if xi.modulus() > yi.modulus() {
            return Err(OgsError::InternalInvariant(format!(
                "sample {i}: output exceeds input in magnitude"
            )));
        }
        for p in 0..T::DOF {
            if xi.part(p) * yi.part(p) < 0.0 {
                return Err(OgsError::InternalInvariant(format!(
                    "sample {i}: sign flip in component {p}"
                )));
            }
        }
    }
    Ok(())
}

fn random_direction<T: Sample>(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..n * T::DOF)
        .map(|_| StandardNormal.sample(rng))
        .collect();
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        d.iter_mut().for_each(|v| *v /= norm);
    }
    d
}

fn displace<T: Sample>(x: &[T], d: &[f64], step: f64) -> Vec<T> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| (0..T::DOF).fold(v, |acc, p| acc.perturb(p, step * d[i * T::DOF + p])))
        .collect()
}

fn min_slope<T: Sample>(
    x: &[T],
    trials: usize,
    step: f64,
    seed: u64,
    cost: impl Fn(&[T]) -> Result<f64>,
) -> Result<f64> {
    if trials == 0 || !(step > 0.0) {
        return Err(OgsError::InvalidParameter(
            "trials must be positive and step > 0".into(),
        ));
    }
    let base = cost(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let d = random_direction::<T>(&mut rng, x.len());
        let moved = displace(x, &d, step);
        worst = worst.min((cost(&moved)? - base) / step);
    }
    Ok(worst)
}

/// Smallest one-sided difference quotient `(F(x + step*d) - F(x)) / step` over
/// `trials` random unit directions. Near a minimizer this is not meaningfully
/// negative.
pub fn optimality_check<T: Sample>(
    y: &[T],
    x: &[T],
    objective: &Objective,
    trials: usize,
    step: f64,
    seed: u64,
) -> Result<f64> {
    if y.len() != x.len() {
        return Err(OgsError::ShapeMismatch {
            expected: y.len().to_string(),
            actual: x.len().to_string(),
        });
    }
    min_slope(x, trials, step, seed, |v| ogs_cost(y, v, objective))
}

/// Two-dimensional counterpart of [`optimality_check`].
pub fn optimality_check_2d<T: Sample>(
    y: ArrayView2<'_, T>,
    x: ArrayView2<'_, T>,
    objective: &Objective,
    trials: usize,
    step: f64,
    seed: u64,
) -> Result<f64> {
    if y.dim() != x.dim() {
        return Err(OgsError::ShapeMismatch {
            expected: format!("{:?}", y.dim()),
            actual: format!("{:?}", x.dim()),
        });
    }
    let dim = x.dim();
    let flat: Vec<T> = x.iter().copied().collect();
    min_slope(&flat, trials, step, seed, |v| {
        let xv = Array2::from_shape_vec(dim, v.to_vec()).expect("shape preserved");
        ogs_cost_2d(y, xv.view(), objective)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ogs::{ogs_denoise, GroupShape, OgsConfig};
    use crate::penalty::PenaltyKind;

    #[test]
    fn properties_detect_violations() {
        assert!(check_minimizer_properties(&[1.0, -2.0], &[0.5, -1.0]).is_ok());
        assert!(check_minimizer_properties(&[1.0], &[-0.5]).is_err());
        assert!(check_minimizer_properties(&[1.0], &[1.5]).is_err());
        assert!(check_minimizer_properties(&[0.0], &[0.1]).is_err());
        assert!(check_minimizer_properties(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn converged_output_passes_slope_check() {
        let y: Vec<f64> = (0..40).map(|i| ((i as f64) * 0.7).sin() * 3.0).collect();
        let cfg = OgsConfig::with_beta(0.8, GroupShape::one_d(3).unwrap(), PenaltyKind::Atan, 0.7)
            .unwrap()
            .with_iterations(500)
            .unwrap();
        let out = ogs_denoise(&y, &cfg).unwrap();
        let slope = optimality_check(&y, &out.estimate, cfg.objective(), 200, 1e-6, 3).unwrap();
        assert!(slope > -1e-3, "{slope}");
        let away: Vec<f64> = out.estimate.iter().map(|v| v * 0.9).collect();
        let slope = optimality_check(&y, &away, cfg.objective(), 200, 1e-6, 3).unwrap();
        assert!(slope < -1e-3, "{slope}");
    }
}
