//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion outside `KNOWN_RED` fails.

mod common;

use common::{dphi, phi, random_complex, random_kind, random_real};
use ndarray::Array2;
use num_complex::Complex64;
use ogs_core::calibration::{estimate_alpha, solve_lambda_for_alpha, AlphaSetup, SolveOptions};
use ogs_core::ogs::{
    check_minimizer_properties, majorizer_q, ogs_cost, ogs_cost_2d, ogs_denoise, ogs_denoise_2d,
    optimality_check, Workspace1d,
};
use ogs_core::shrinkage::ThresholdProblem;
use ogs_core::spectral::{denoise_speech_detailed, istft, stft, Spectrogram, SpectrogramPlan};
use ogs_core::sure::{log_grid, sure_scan_2d, SureOptions};
use ogs_core::toolkit::{
    add_awgn, benchmark_example1, empirical_wiener_post, gen_harmonic, snr_db, BenchmarkConfig,
    LambdaMode, NoiseLevel,
};
use ogs_core::{GroupShape, OgsConfig, OgsTemplate, Penalty, PenaltyKind, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::time::{Duration, Instant};

/// Criteria that are expected to fail; see the README.
const KNOWN_RED: &[usize] = &[7, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn first_failure(failures: &[String]) -> String {
    failures
        .first()
        .map(|f| format!("; first failure: {f}"))
        .unwrap_or_default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c01_penalty_identities() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for _ in 0..2000 {
        let kind = random_kind(&mut r);
        let a = if kind == PenaltyKind::Abs {
            0.0
        } else {
            r.random_range(0.01..5.0)
        };
        let p = Penalty::new(kind, a).unwrap();
        let u: f64 = r.random_range(1e-3..20.0);
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
        let checks = [
            ("value", rel(p.value(u), phi(kind, a, u))),
            ("symmetry", (p.value(-u) - p.value(u)).abs()),
            ("weight", rel(p.weight(u).unwrap(), dphi(kind, a, u) / u)),
            ("derivative", rel(p.deriv(u).unwrap(), dphi(kind, a, u))),
        ];
        for (name, e) in checks {
            worst = worst.max(e);
            if e > 1e-12 {
                failures.push(format!("{name} {kind} a={a} u={u} err={e:e}"));
            }
        }
        let h = 1e-3 * u;
        let second = p.value(u + h) - 2.0 * p.value(u) + p.value(u - h);
        if second > 1e-12 * p.value(u).max(1.0) {
            failures.push(format!("concavity {kind} a={a} u={u}"));
        }
        let t = 1e-9;
        if (p.value(t) / t - 1.0).abs() > 1e-6 {
            failures.push(format!("unit slope {kind} a={a}"));
        }
        if kind != PenaltyKind::Abs {
            let h = 1e-7 / a;
            let curv = (dphi(kind, a, h) - 1.0) / h;
            if (p.curvature_at_zero() + a).abs() > 1e-12 || (curv + a).abs() > 1e-5 * a {
                failures.push(format!("curvature {kind} a={a}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "2000 random cases, worst identity error {worst:.1e}{}",
            first_failure(&failures)
        ),
    )
}

fn g(kind: PenaltyKind, a: f64, lambda: f64, y: f64, x: f64) -> f64 {
    0.5 * (y - x).powi(2) + lambda * phi(kind, a, x)
}

fn c02_threshold_oracle() -> Outcome {
    let mut r = rng(2);
    let grid: Vec<f64> = (0..=200_000).map(|i| -10.0 + i as f64 * 1e-4).collect();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let kind = random_kind(&mut r);
        let lambda: f64 = r.random_range(0.3..4.0);
        let beta: f64 = r.random_range(0.0..0.999);
        let a = if kind == PenaltyKind::Abs {
            0.0
        } else {
            beta / lambda
        };
        let y: f64 = r.random_range(-10.0..10.0);
        let tp = ThresholdProblem::new(lambda, Penalty::new(kind, a).unwrap()).unwrap();
        let best = grid
            .iter()
            .copied()
            .min_by(|p, q| g(kind, a, lambda, y, *p).total_cmp(&g(kind, a, lambda, y, *q)))
            .unwrap();
        worst = worst.max((tp.scalar_threshold(y) - best).abs());
    }
    let scalar_ok = worst <= 5e-4;

    let mut worst_group = 0.0f64;
    for _ in 0..300 {
        let kind = random_kind(&mut r);
        let lambda: f64 = r.random_range(0.3..3.0);
        let a = if kind == PenaltyKind::Abs {
            0.0
        } else {
            r.random_range(0.0..0.999) / lambda
        };
        let dim = r.random_range(1..=3);
        let y: Vec<f64> = (0..dim).map(|_| r.random_range(-5.0..5.0)).collect();
        let tp = ThresholdProblem::new(lambda, Penalty::new(kind, a).unwrap()).unwrap();
        let got = tp.group_threshold(&y).unwrap();
        let gc = |x: &[f64]| {
            let d: f64 = y.iter().zip(x).map(|(u, v)| (u - v).powi(2)).sum();
            0.5 * d + lambda * phi(kind, a, x.iter().map(|v| v * v).sum::<f64>().sqrt())
        };
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut best = (f64::INFINITY, vec![0.0; dim]);
        for i in 0..=20_000 {
            let t = norm * i as f64 / 20_000.0;
            let x: Vec<f64> = y.iter().map(|v| v * t / norm).collect();
            let c = gc(&x);
            if c < best.0 {
                best = (c, x);
            }
        }
        for _ in 0..200 {
            let x: Vec<f64> = got
                .iter()
                .map(|v| v + r.random_range(-0.05..0.05))
                .collect();
            if gc(&x) < gc(&got) - 1e-12 {
                worst_group = f64::INFINITY;
            }
        }
        let e = got
            .iter()
            .zip(&best.1)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        worst_group = worst_group.max(e);
    }
    outcome(
        scalar_ok && worst_group <= 1e-3,
        format!(
            "scalar worst {worst:.1e} (bound 5e-4), group worst {worst_group:.1e} (bound 1e-3)"
        ),
    )
}

fn c03_threshold_slope() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for kind in PenaltyKind::NON_CONVEX {
        let tp = ThresholdProblem::new(4.0, Penalty::new(kind, 0.2).unwrap()).unwrap();
        let h = 1e-6;
        let slope = (tp.scalar_threshold(4.0 + 2.0 * h) - tp.scalar_threshold(4.0 + h)) / h;
        pass &= (slope / 5.0 - 1.0).abs() <= 0.02;
        parts.push(format!("{kind} {slope:.4}"));
    }
    outcome(
        pass,
        format!("finite-difference slope at lambda+: {}", parts.join(", ")),
    )
}

fn c04_majorizer() -> Outcome {
    let mut r = rng(4);
    let mut worst = f64::INFINITY;
    let mut tangency = 0.0f64;
    for kind in PenaltyKind::ALL {
        for _ in 0..10_000 {
            let a = if kind == PenaltyKind::Abs {
                0.0
            } else {
                r.random_range(0.01..5.0)
            };
            let p = Penalty::new(kind, a).unwrap();
            let x: f64 = r.random_range(-20.0..20.0);
            let mut v: f64 = r.random_range(-20.0..20.0);
            if v == 0.0 {
                v = 1.0;
            }
            worst = worst.min(majorizer_q(&p, x, v).unwrap() - p.value(x));
            tangency = tangency.max((majorizer_q(&p, v, v).unwrap() - p.value(v)).abs());
        }
    }
    outcome(
        worst >= -1e-12 && tangency <= 1e-12,
        format!("min slack {worst:.2e}, max tangency error {tangency:.1e} over 4 x 10^4 pairs"),
    )
}

fn random_config(r: &mut ChaCha8Rng, shape: GroupShape) -> OgsConfig {
    let kind = random_kind(r);
    let lambda: f64 = r.random_range(0.2..2.0);
    OgsConfig::with_beta(lambda, shape, kind, r.random_range(0.1..=1.0))
        .unwrap()
        .with_iterations(r.random_range(5..60))
        .unwrap()
}

fn monotone(initial: f64, trace: &[f64]) -> Option<f64> {
    let mut prev = initial;
    let mut worst = f64::NEG_INFINITY;
    for &c in trace {
        worst = worst.max(c - prev);
        prev = c;
    }
    (worst <= 1e-12).then_some(worst)
}

fn c05_mm_monotone() -> Outcome {
    let mut r = rng(5);
    let mut failures = Vec::new();
    let mut worst_rise = f64::NEG_INFINITY;
    for run in 0..100 {
        let two_d = run % 2 == 1;
        let complex = (run / 2) % 2 == 1;
        let (n1, n2) = if two_d {
            (r.random_range(2..20), r.random_range(2..30))
        } else {
            (1, r.random_range(5..300))
        };
        let shape = if two_d {
            GroupShape::new(r.random_range(1..4), r.random_range(1..4)).unwrap()
        } else {
            GroupShape::one_d(r.random_range(1..7)).unwrap()
        };
        let cfg = random_config(&mut r, shape);
        let n = n1 * n2;
        let ok = if complex {
            let y = random_complex(&mut r, n, 0.3);
            check_run(&y, n1, n2, two_d, &cfg, &mut worst_rise)
        } else {
            let y = random_real(&mut r, n, 0.3);
            check_run(&y, n1, n2, two_d, &cfg, &mut worst_rise)
        };
        if let Err(e) = ok {
            failures.push(format!("run {run}: {e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "100 runs (1D/2D x real/complex), largest cost increase {worst_rise:.1e}{}",
            first_failure(&failures)
        ),
    )
}

fn check_run<T: Sample>(
    y: &[T],
    n1: usize,
    n2: usize,
    two_d: bool,
    cfg: &OgsConfig,
    worst: &mut f64,
) -> Result<(), String> {
    let (x, trace, initial) = if two_d {
        let ya = Array2::from_shape_vec((n1, n2), y.to_vec()).unwrap();
        let out = ogs_denoise_2d(ya.view(), cfg).map_err(|e| e.to_string())?;
        let init = ogs_cost_2d(ya.view(), ya.view(), cfg.objective()).unwrap();
        (
            out.estimate.into_iter().collect::<Vec<_>>(),
            out.cost_trace,
            init,
        )
    } else {
        let out = ogs_denoise(y, cfg).map_err(|e| e.to_string())?;
        (
            out.estimate,
            out.cost_trace,
            ogs_cost(y, y, cfg.objective()).unwrap(),
        )
    };
    let mut prev = initial;
    for &c in &trace {
        *worst = worst.max(c - prev);
        prev = c;
    }
    if monotone(initial, &trace).is_none() {
        return Err("cost increased".into());
    }
    check_minimizer_properties(y, &x).map_err(|e| e.to_string())
}

fn c06_reductions() -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    let mut unrestricted = 0.0f64;
    let example = OgsConfig::new(
        4.0,
        GroupShape::one_d(1).unwrap(),
        Penalty::new(PenaltyKind::Atan, 0.2).unwrap(),
    )
    .unwrap()
    .with_iterations(200)
    .unwrap();
    let tp = ThresholdProblem::new(4.0, Penalty::new(PenaltyKind::Atan, 0.2).unwrap()).unwrap();
    worst = worst
        .max((ogs_denoise(&[6.0], &example).unwrap().estimate[0] - tp.scalar_threshold(6.0)).abs());
    for kind in PenaltyKind::ALL {
        for _ in 0..10 {
            let lambda: f64 = r.random_range(0.5..4.0);
            let p = Penalty::with_beta(kind, r.random_range(0.0..0.95), lambda, 1).unwrap();
            let tp = ThresholdProblem::new(lambda, p).unwrap();
            let y: Vec<f64> = (0..60)
                .map(|_| r.random_range(-3.0 * lambda..3.0 * lambda))
                .collect();
            let one = OgsConfig::new(lambda, GroupShape::one_d(1).unwrap(), p)
                .unwrap()
                .with_iterations(200)
                .unwrap();
            let two = OgsConfig::new(lambda, GroupShape::new(1, 1).unwrap(), p)
                .unwrap()
                .with_iterations(200)
                .unwrap();
            let x1 = ogs_denoise(&y, &one).unwrap().estimate;
            let ya = Array2::from_shape_vec((6, 10), y.clone()).unwrap();
            let x2 = ogs_denoise_2d(ya.view(), &two).unwrap().estimate;
            for ((a, b), v) in x1.iter().zip(x2.iter()).zip(&y) {
                let e = (a - tp.scalar_threshold(*v))
                    .abs()
                    .max((b - tp.scalar_threshold(*v)).abs());
                unrestricted = unrestricted.max(e);
                if (v.abs() - lambda).abs() >= 0.1 * lambda {
                    worst = worst.max(e);
                }
            }
        }
    }
    let mut bitwise = true;
    for trial in 0..20 {
        let n = r.random_range(1..400);
        let k = r.random_range(1..8);
        let y = random_real(&mut r, n, 0.2);
        let ya = Array2::from_shape_vec((1, n), y.clone()).unwrap();
        let base = random_config(&mut r, GroupShape::one_d(k).unwrap());
        for iters in 1..=base.iterations().min(30) {
            let cfg = base.with_iterations(iters).unwrap();
            let a = ogs_denoise(&y, &cfg).unwrap();
            let b = ogs_denoise_2d(ya.view(), &cfg).unwrap();
            let same = a
                .estimate
                .iter()
                .zip(b.estimate.iter())
                .all(|(u, v)| u.to_bits() == v.to_bits())
                && a.cost_trace
                    .iter()
                    .zip(&b.cost_trace)
                    .all(|(u, v)| u.to_bits() == v.to_bits());
            if !same {
                bitwise = false;
                eprintln!("bitwise mismatch trial {trial} iters {iters}");
            }
        }
    }
    outcome(
        worst <= 1e-6 && bitwise,
        format!(
            "K=1 worst deviation {worst:.1e} (bound 1e-6) for |y| outside 10% of lambda, \
             {unrestricted:.1e} including the threshold band; 1xN vs 1D bit-identical: {bitwise}"
        ),
    )
}

fn c07_optimality() -> Outcome {
    let mut r = rng(7);
    let mut worst = f64::INFINITY;
    let mut failed = 0;
    let mut cleared = 0;
    for i in 0..40 {
        let n = r.random_range(2..=16);
        let k = r.random_range(1..=4.min(n));
        let kind = random_kind(&mut r);
        let lambda: f64 = r.random_range(0.2..2.0);
        let cfg = OgsConfig::with_beta(
            lambda,
            GroupShape::one_d(k).unwrap(),
            kind,
            r.random_range(0.1..=0.9),
        )
        .unwrap()
        .with_cost_tracking(false);
        let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
        let slope_after = |iters: usize| {
            let c = cfg.with_iterations(iters).unwrap();
            let x = ogs_denoise(&y, &c).unwrap().estimate;
            optimality_check(&y, &x, c.objective(), 64, 1e-6, i).unwrap()
        };
        let slope = slope_after(200);
        worst = worst.min(slope);
        if slope < -1e-4 {
            failed += 1;
            if slope_after(20_000) >= -1e-4 {
                cleared += 1;
            }
        }
    }
    outcome(
        failed == 0,
        format!(
            "40 instances, N <= 16, worst directional slope {worst:.2e} (bound -1e-4); \
             {failed} below bound at 200 iterations, {cleared} of them pass at 20000"
        ),
    )
}

fn c08_table_spots() -> Outcome {
    let spots = [
        ((1, 1), 4.25, 1.00e-2, 0.15),
        ((1, 5), 1.20, 1.00e-4, 0.25),
        ((2, 8), 0.41, 1.00e-4, 0.25),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for ((k1, k2), lambda, expected, tol) in spots {
        let setup = AlphaSetup::new(GroupShape::new(k1, k2).unwrap(), PenaltyKind::Atan, 1.0, 25);
        let alpha = estimate_alpha(lambda, &setup, 1_000_000, 0).unwrap();
        let ok = (alpha / expected - 1.0).abs() <= tol;
        pass &= ok;
        parts.push(format!(
            "{k1}x{k2} lambda={lambda}: {alpha:.3e} vs {expected:.2e} {}",
            if ok { "ok" } else { "out of band" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c09_inversion() -> Outcome {
    let setup = AlphaSetup::new(GroupShape::one_d(5).unwrap(), PenaltyKind::Atan, 1.0, 25);
    let options = SolveOptions {
        n_samples: 1_000_000,
        seed: 0,
        use_reference: false,
        ..Default::default()
    };
    let sol = solve_lambda_for_alpha(1e-3, &setup, &options).unwrap();
    outcome(
        (sol.lambda / 1.07 - 1.0).abs() <= 0.10,
        format!(
            "lambda = {:.4} for alpha = 1e-3 ({} evaluations)",
            sol.lambda,
            sol.evaluations.len()
        ),
    )
}

fn c10_reconstruction() -> Outcome {
    let mut r = rng(10);
    let mut worst = 0.0f64;
    let mut cola = 0.0f64;
    for _ in 0..100 {
        let plan = SpectrogramPlan::new([64, 256, 512][r.random_range(0..3)]).unwrap();
        cola = cola.max(plan.cola_error());
        let n = r.random_range(1..40_000);
        let s: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let back = istft(&stft(&s, &plan).unwrap()).unwrap();
        let err: f64 = s
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = s.iter().map(|a| a * a).sum::<f64>().sqrt();
        worst = worst.max(err / norm);
    }
    outcome(
        worst < 1e-10 && cola < 1e-12,
        format!("worst relative error {worst:.1e}, COLA error {cola:.1e}"),
    )
}

fn c11_sure_tracking() -> Outcome {
    let (n1, n2) = (256, 512);
    let mut r = rng(11);
    let mut x = Array2::<Complex64>::zeros((n1, n2));
    for _ in 0..400 {
        let (r0, c0) = (r.random_range(0..n1 - 12), r.random_range(0..n2 - 12));
        let (h, w) = (r.random_range(3..12), r.random_range(2..10));
        let amp: f64 = r.random_range(0.5..3.0);
        let ph: f64 = r.random_range(0.0..std::f64::consts::TAU);
        for i in 0..h {
            for j in 0..w {
                let env = (std::f64::consts::PI * (i as f64 + 0.5) / h as f64).sin()
                    * (std::f64::consts::PI * (j as f64 + 0.5) / w as f64).sin();
                x[[r0 + i, c0 + j]] += Complex64::from_polar(amp * env, ph + 0.3 * i as f64);
            }
        }
    }
    let sigma = 0.5;
    let y = x.mapv(|v| {
        let re: f64 = StandardNormal.sample(&mut r);
        let im: f64 = StandardNormal.sample(&mut r);
        v + Complex64::new(re, im) * sigma
    });
    let template = OgsTemplate::new(GroupShape::new(4, 4).unwrap(), PenaltyKind::Atan, 1.0, 25);
    let grid = log_grid(0.1, 1.0, 10).unwrap();
    let scan = sure_scan_2d(
        y.view(),
        sigma,
        &grid,
        &template,
        &SureOptions {
            seed: 11,
            ..Default::default()
        },
    )
    .unwrap();
    let truth: Vec<f64> = grid
        .iter()
        .map(|&l| {
            let f = ogs_denoise_2d(y.view(), &template.config(l).unwrap())
                .unwrap()
                .estimate;
            f.iter()
                .zip(x.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum()
        })
        .collect();
    let worst = scan
        .estimates
        .iter()
        .zip(&truth)
        .map(|(e, t)| (e.estimated_mse / t - 1.0).abs())
        .fold(0.0, f64::max);
    let argmin = |v: &[f64]| {
        v.iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0
    };
    let sure_vals: Vec<f64> = scan.estimates.iter().map(|e| e.estimated_mse).collect();
    let (i_s, i_t) = (argmin(&sure_vals), argmin(&truth));
    outcome(
        worst <= 0.10 && i_s.abs_diff(i_t) <= 1,
        format!("worst relative SURE error {worst:.3} (bound 0.10); argmin index SURE {i_s} vs true {i_t}"),
    )
}

fn c12_example1() -> Outcome {
    let seeds: Vec<u64> = (0..20).collect();
    let max = benchmark_example1(&BenchmarkConfig {
        seeds: seeds.clone(),
        ..Default::default()
    })
    .unwrap();
    let m = &max.mean_snr_db;
    let gap = m["ogs_atan"] - m["ogs_abs"];
    let beats_hard = m["ogs_atan"] >= m["hard"];
    let alpha = benchmark_example1(&BenchmarkConfig {
        seeds,
        mode: LambdaMode::Alpha(1e-2),
        ..Default::default()
    })
    .unwrap();
    let a = &alpha.mean_snr_db;
    let order = ["ogs_atan", "ogs_log", "ogs_abs", "hard", "soft"];
    let ordered = order.windows(2).all(|w| a[w[0]] > a[w[1]]);
    let fmt = |m: &std::collections::BTreeMap<String, f64>| {
        order
            .iter()
            .map(|k| format!("{k} {:.2}", m[*k]))
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(
        gap >= 1.5 && beats_hard && ordered,
        format!(
            "max-SNR: {} (atan - abs = {gap:.2} dB); alpha=1e-2: {}",
            fmt(m),
            fmt(a)
        ),
    )
}

fn c13_speech() -> Outcome {
    let shape = GroupShape::new(8, 2).unwrap();
    let setup = AlphaSetup::new(shape, PenaltyKind::Atan, 1.0, 25).complex();
    let options = SolveOptions {
        n_samples: 500_000,
        seed: 0,
        use_reference: false,
        ..Default::default()
    };
    let lambda = solve_lambda_for_alpha(3e-4, &setup, &options)
        .unwrap()
        .lambda;
    let cfg = setup.config(lambda).unwrap();
    let mut gains = Vec::new();
    let mut ewp_worst = f64::INFINITY;
    for seed in 0..10 {
        let x = gen_harmonic(32_000, 16_000, seed);
        let (y, sigma) = add_awgn(&x, NoiseLevel::SnrDb(10.0), 1000 + seed).unwrap();
        let out = denoise_speech_detailed(&y, 16_000, &cfg, sigma).unwrap();
        let before = snr_db(&x, &y).unwrap();
        let after = snr_db(&x, &out.signal).unwrap();
        let noisy: Vec<Complex64> = out.noisy.data.iter().copied().collect();
        let pilot: Vec<Complex64> = out.denoised.data.iter().copied().collect();
        let post = empirical_wiener_post(&noisy, &pilot, out.coefficient_sigma).unwrap();
        let spec = Spectrogram {
            data: Array2::from_shape_vec(out.noisy.data.dim(), post).unwrap(),
            ..out.noisy.clone()
        };
        let with_ewp = snr_db(&x, &istft(&spec).unwrap()).unwrap();
        gains.push(after - before);
        ewp_worst = ewp_worst.min(with_ewp - after);
    }
    let mean = gains.iter().sum::<f64>() / gains.len() as f64;
    outcome(
        mean >= 4.0 && ewp_worst >= -0.1,
        format!("lambda = {lambda:.4}; mean SNR gain {mean:.2} dB over 10 seeds; worst EWP change {ewp_worst:+.2} dB"),
    )
}

fn c14_performance() -> Outcome {
    let n = 1_000_000;
    let k = 5;
    let mut r = rng(14);
    let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut r)).collect();
    let cfg = OgsConfig::with_beta(1.0, GroupShape::one_d(k).unwrap(), PenaltyKind::Atan, 1.0)
        .unwrap()
        .with_cost_tracking(false);
    let mut ws = Workspace1d::<f64>::new(n, k);
    let slots = ws.allocated_f64_slots();
    let t = Instant::now();
    let out = ws.run(&y, &cfg).unwrap();
    let elapsed = t.elapsed();
    outcome(
        elapsed < Duration::from_secs(5) && slots <= 5 * (n + k) && out.iterations_run() == 25,
        format!(
            "N=1e6, K=5, 25 iterations in {:.2} s; workspace {slots} f64 slots (bound {})",
            elapsed.as_secs_f64(),
            5 * (n + k)
        ),
    )
}

type Criterion = (usize, &'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        (1, "penalty identities", 1.0, c01_penalty_identities),
        (
            2,
            "threshold oracle equivalence",
            30.0,
            c02_threshold_oracle,
        ),
        (3, "slope at threshold", 1.0, c03_threshold_slope),
        (4, "majorizer", 1.0, c04_majorizer),
        (
            5,
            "MM monotonicity and minimizer properties",
            60.0,
            c05_mm_monotone,
        ),
        (6, "K=1 reduction and 1D/2D equality", 10.0, c06_reductions),
        (7, "optimality certificate", 30.0, c07_optimality),
        (8, "attenuation table spot values", 300.0, c08_table_spots),
        (9, "lambda for alpha = 1e-3, K=5", 120.0, c09_inversion),
        (10, "STFT perfect reconstruction", 10.0, c10_reconstruction),
        (11, "MC-SURE tracking", 300.0, c11_sure_tracking),
        (12, "group-sparse benchmark", 300.0, c12_example1),
        (13, "speech-analogue denoising", 180.0, c13_speech),
        (14, "performance and memory", 60.0, c14_performance),
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let secs = t.elapsed().as_secs_f64();
        let pass = o.pass && secs <= limit;
        let tag = if pass { "PASS" } else { "FAIL" };
        let note = if !pass && KNOWN_RED.contains(&id) {
            " [known red]"
        } else {
            ""
        };
        println!(
            "criterion {id:2} {tag}{note}  {name} ({secs:.2} s, limit {limit} s): {}",
            o.detail
        );
        if !pass && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
