mod common;

use common::*;
use lighthouse_core::field::SpatialKernel;
use lighthouse_core::kernels::*;
use lighthouse_core::numeric::levelset::{find_zeros, Region};
use lighthouse_core::synchrony::{script_g_exact, solve_period};
use lighthouse_core::turing::*;
use lighthouse_core::waves::*;
use lighthouse_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn fig7_model(inv_v: f64) -> WaveModel {
    WaveModel::new(
        SynapseKernel::new(1.0).unwrap(),
        SpatialKernel::new(1.0, 2.0, 10.0).unwrap(),
        Nonlinearity::SmoothExp { r: 2.0, h: -1.0 },
        inv_v,
    )
    .unwrap()
}

/// Closed-form `sum_m eta(s - m T)` for any real `s`.
fn comb(alpha: f64, period: f64, s: f64) -> f64 {
    let s = s.rem_euclid(period);
    let q = (-alpha * period).exp();
    alpha * alpha * (-alpha * s).exp() * (s / (1.0 - q) + period * q / ((1.0 - q) * (1.0 - q)))
}

/// `int w(z) P(xi - rho z - |z|/v) dz`, split at every kink of the integrand.
fn drive_oracle(w: &SpatialKernel, alpha: f64, period: f64, rho: f64, inv_v: f64, xi: f64) -> f64 {
    let zmax = 80.0;
    let mut cuts = vec![-zmax, 0.0, zmax];
    for (sign, slope) in [(1.0, rho + inv_v), (-1.0, inv_v - rho)] {
        // kinks where xi - slope |z| = m T on each half line
        if slope.abs() > 1e-14 {
            for m in -400..400 {
                let z = (xi - m as f64 * period) / slope;
                if z > 0.0 && z < zmax {
                    cuts.push(sign * z);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let f = |z: f64| w.eval(z) * comb(alpha, period, xi - rho * z - z.abs() * inv_v);
    cuts.windows(2).map(|c| simpson(f, c[0], c[1], 40 + ((c[1] - c[0]) / 0.02) as usize)).sum()
}

#[test]
fn wave_drive_matches_space_quadrature() {
    for inv_v in [0.0, 0.5, 0.25] {
        let model = fig7_model(inv_v);
        for xi in [0.3, 2.0, 5.5] {
            let v = wave_drive(xi, 2.0 * PI, 1.0, &model, 4000).unwrap();
            let oracle = drive_oracle(&model.w, 1.0, 2.0 * PI, 1.0, inv_v, xi);
            assert!((v - oracle).abs() < 1e-6 * oracle.abs().max(1.0), "1/v {inv_v} xi {xi}: {v} vs {oracle}");
        }
    }
}

#[test]
fn wave_drive_mean_is_gamma_over_t() {
    let model = fig7_model(0.5);
    let d = sample_drive(&model, 7.0, 0.8, 1024).unwrap();
    let mean = d.psi.iter().sum::<f64>() / 1024.0;
    assert!((mean - 10.0 / 7.0).abs() < 1e-10);
}

#[test]
fn dispersion_is_even_in_rho() {
    let model = fig7_model(1.0);
    let a = dispersion_solve(0.7, &model).unwrap();
    let b = dispersion_solve(-0.7, &model).unwrap();
    assert!((a[0] - b[0]).abs() < 1e-9 * a[0]);
}

/// Independent synchronous field period: secant iteration on the rotation
/// condition with the drive integrated over space.
fn field_period_oracle(model: &WaveModel, t0: f64) -> f64 {
    let rot = |t: f64| {
        let g = |x: f64| model.s.eval(drive_oracle(&model.w, model.kernel.alpha, t, 0.0, model.inv_v, x));
        simpson(g, 0.0, t, 6400) - 2.0 * PI
    };
    let (mut a, mut b) = (0.999 * t0, 1.001 * t0);
    let (mut fa, mut fb) = (rot(a), rot(b));
    for _ in 0..8 {
        let c = b - fb * (b - a) / (fb - fa);
        (a, fa) = (b, fb);
        b = c;
        if (b - a).abs() < 1e-12 * b {
            break;
        }
        fb = rot(b);
    }
    b
}

#[test]
fn zero_rho_dispersion_is_the_synchronous_period() {
    let model = fig7_model(0.0);
    let t = dispersion_solve(0.0, &model).unwrap()[0];
    let sync = solve_period(&model.s, 10.0, &model.kernel, 0.0).unwrap();
    assert!((t - sync).abs() < 1e-8, "{t} vs {sync}");
    for inv_v in [1.0, 0.2] {
        let model = fig7_model(inv_v);
        let t = dispersion_solve(0.0, &model).unwrap()[0];
        let oracle = field_period_oracle(&model, t);
        assert!((t - oracle).abs() < 1e-8 * t, "1/v {inv_v}: {t} vs {oracle}");
    }
}

/// `int w(z) e^{ikz} e^{lambda rho z/T} sum_p eta(pT - rho z - |z|/v) e^{-lambda p} dz`.
fn base_sum_oracle(w: &SpatialKernel, alpha: f64, period: f64, rho: f64, inv_v: f64, lambda: C64, k: f64) -> C64 {
    let f = |z: f64| {
        let s = rho * z + z.abs() * inv_v;
        let p0 = (s / period).floor() as i64;
        let mut acc = C64::new(0.0, 0.0);
        for p in p0..p0 + 200 {
            let u = p as f64 * period - s;
            if u > 0.0 {
                acc += (-lambda * p as f64).exp() * eta(alpha, u);
            }
        }
        acc * C64::from_polar(w.eval(z), k * z) * (lambda * rho * z / period).exp()
    };
    let mut cuts: Vec<f64> = vec![-60.0, 0.0, 60.0];
    for m in -200..200 {
        for slope in [rho + inv_v, rho - inv_v] {
            if slope.abs() > 1e-14 {
                let z = m as f64 * period / slope;
                if z.abs() < 60.0 && z != 0.0 {
                    cuts.push(z);
                }
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2).map(|c| simpson_c(f, c[0], c[1], 400)).sum()
}

#[test]
fn linear_wave_kernel_sum_matches_quadrature() {
    let model = WaveModel::new(
        SynapseKernel::new(1.5).unwrap(),
        SpatialKernel::new(1.0, 2.0, 0.5).unwrap(),
        Nonlinearity::Linear { gamma: 2.0, theta: -1.0 },
        0.5,
    )
    .unwrap();
    let wave = WaveSolution::new(model, 0.4, 5.0).unwrap().with_harmonics(6000).unwrap();
    let lambda = C64::new(0.1, 0.3);
    let k = 0.5;
    let got = wave.base_sum(lambda, k).unwrap();
    let oracle = base_sum_oracle(&model.w, 1.5, 5.0, 0.4, 0.5, lambda, k);
    assert!((got - oracle).norm() < 1e-4 * oracle.norm(), "{got} vs {oracle}");
    let a = wave.a(lambda, k).unwrap();
    assert!((a - (lambda.exp() - 1.0) * 2.0 * got).norm() < 1e-14 * a.norm());
}

#[test]
fn flat_linear_kernel_sum_is_synchrony() {
    let w = SpatialKernel::new(1.0, 2.0, 0.0).unwrap();
    let kernel = SynapseKernel::new(4.0).unwrap();
    let model = WaveModel::new(kernel, w, Nonlinearity::Linear { gamma: 25.0, theta: -1.0 }, 0.0).unwrap();
    let ctx = TuringContext::new(model).unwrap();
    assert!((ctx.period() - 2.0 * PI).abs() < 1e-9);
    let lambda = C64::new(-0.2, 0.7);
    let k = 0.6;
    let lattice: C64 = (1..200).map(|p| (-lambda * p as f64).exp() * eta(4.0, p as f64 * 2.0 * PI)).sum();
    let got = ctx.wave.base_sum(lambda, k).unwrap();
    assert!((got - lattice * w.fourier_real(k)).norm() < 1e-12 * got.norm());
}

#[test]
fn linear_f_n_is_constant() {
    let model = fig7_model(0.0);
    let lin = WaveModel { s: Nonlinearity::Linear { gamma: 3.0, theta: -1.0 }, ..model };
    let wave = WaveSolution::new(lin, 0.0, 4.0).unwrap();
    let l = C64::new(0.2, -0.4);
    for n in [-5, 0, 7] {
        assert!((f_n(n, l, &wave).unwrap() - (l.exp() - 1.0) * 3.0).norm() < 1e-14);
        assert!(f_n(n, C64::new(0.0, 0.0), &wave).unwrap().norm() == 0.0);
    }
    assert!(wave.a(C64::new(0.0, 0.0), 0.7).unwrap().norm() < 1e-15);
}

#[test]
fn smooth_f_n_near_slow_drive_limit() {
    // Weak modulation of psi makes f_n close to S'(psi(T)) (e^lambda - 1).
    let model = WaveModel::new(
        SynapseKernel::new(0.05).unwrap(),
        SpatialKernel::new(1.0, 2.0, 3.0).unwrap(),
        Nonlinearity::SmoothExp { r: 1.0, h: -1.0 },
        0.0,
    )
    .unwrap();
    let wave = WaveSolution::solve(model, 0.0).unwrap().remove(0);
    let l = C64::new(0.1, 0.5);
    let d = wave.drive();
    let dmax = d.dpsi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    assert!(dmax < 0.05);
    let approx = (l.exp() - 1.0) * model.s.prime(d.psi[0]).unwrap();
    for n in [0, 3] {
        let f = wave.f_n(n, l).unwrap();
        assert!((f - approx).norm() < 0.1 * approx.norm(), "{f} vs {approx}");
    }
}

#[test]
fn translation_zero_for_random_contexts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let alpha = rng.random_range(0.5..4.0);
        let w = SpatialKernel::new(1.0, rng.random_range(1.5..3.0), rng.random_range(-0.5..2.0)).unwrap();
        let s = Nonlinearity::SmoothExp { r: 1.0, h: rng.random_range(-2.0..-0.5) };
        let model = WaveModel::new(SynapseKernel::new(alpha).unwrap(), w, s, rng.random_range(0.0..0.5)).unwrap();
        let Ok(ctx) = TuringContext::new(model) else { continue };
        assert!(spectrum_E(C64::new(0.0, 0.0), 0.0, &ctx).unwrap().norm() < 1e-10);
        let e = spectrum_E(C64::new(0.1, 0.2), 0.3, &ctx).unwrap();
        let ec = spectrum_E(C64::new(0.1, -0.2), 0.3, &ctx).unwrap();
        assert!((e.conj() - ec).norm() < 1e-9 * e.norm().max(1.0));
    }
}

fn balanced_ctx(alpha: f64, gamma: f64) -> TuringContext {
    let model = WaveModel::new(
        SynapseKernel::new(alpha).unwrap(),
        SpatialKernel::new(1.0, 2.0, 0.0).unwrap(),
        Nonlinearity::Linear { gamma, theta: -1.0 },
        0.0,
    )
    .unwrap();
    TuringContext::new(model).unwrap()
}

#[test]
fn static_turing_closed_form() {
    let ctx = balanced_ctx(4.0, 25.0);
    let p = static_turing(&ctx).unwrap();
    assert!((p.k_c - 1.0 / 2f64.sqrt()).abs() < 1e-10);
    // hand value: w_hat(k_c) = 1/3, P(2 pi) = alpha^2 T q / (1 - q)^2
    let q = (-4.0 * 2.0 * PI).exp();
    let p_t = 16.0 * 2.0 * PI * q / ((1.0 - q) * (1.0 - q));
    assert!(rel(p.value, 3.0 / p_t) < 1e-12);
    let at = balanced_ctx(4.0, p.value);
    assert!(at.reduced(C64::new(0.0, 0.0), p.k_c).unwrap().norm() < 1e-8);
    let half = balanced_ctx(0.5, 1.0);
    let p = static_turing(&half).unwrap();
    assert!((p.value - 40.4).abs() < 0.1, "{}", p.value);
}

#[test]
fn static_bifurcation_search_matches_closed_form() {
    let alpha = 0.5;
    let exact = static_turing(&balanced_ctx(alpha, 1.0)).unwrap();
    let seed = BifurcationSeed { k: 0.6, omega: 0.0, value: 0.9 * exact.value };
    let found = find_bifurcation(BifurcationKind::StaticTuring, "gamma", seed, |g| {
        let m = WaveModel::new(
            SynapseKernel::new(alpha).unwrap(),
            SpatialKernel::new(1.0, 2.0, 0.0).unwrap(),
            Nonlinearity::Linear { gamma: g, theta: -1.0 },
            0.0,
        )?;
        TuringContext::new(m)
    })
    .unwrap();
    assert!((found.value - exact.value).abs() < 1e-8 * exact.value);
    assert!((found.k_c - exact.k_c).abs() < 1e-6);
}

#[test]
fn critical_curve_increases_with_alpha() {
    let w = SpatialKernel::new(1.0, 2.0, 0.0).unwrap();
    let alphas: Vec<f64> = (1..=16).map(|i| 0.5 * i as f64).collect();
    let pts = critical_curve(&w, -1.0, &alphas).unwrap();
    assert!(pts.windows(2).all(|p| p[1].value > p[0].value));
    assert!(static_turing_point(&SpatialKernel::new(1.0, 2.0, 0.4).unwrap(), &SynapseKernel::new(1.0).unwrap(), -1.0).is_err());
}

#[test]
fn slow_limit_field_roots_match_full_spectrum() {
    // alpha T = 0.05 with T = 2 pi
    let alpha = 0.05 / (2.0 * PI);
    for (gamma, k) in [(40.0, 0.7), (5.0, 0.3), (-15.0, 0.7)] {
        let ctx = balanced_ctx(alpha, gamma);
        let slow = slow_limit_spectrum(k, &ctx).unwrap();
        let region = Region::new(-0.2, 0.1, -0.1, 0.1);
        let full = find_zeros(|l| ctx.wave.spectral_function(l, k), region, 200, 200, 1e-12);
        for r in &slow {
            let best = full.iter().map(|z| (z.z - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-3 * r.norm().max(1e-3), "gamma {gamma}: slow {r} vs {full:?}");
        }
    }
}

#[test]
fn slow_limit_thresholds() {
    let ctx = balanced_ctx(0.01, 10.0);
    let c = slow_limit_conditions(&ctx).unwrap();
    assert!((c.k_c - 1.0 / 2f64.sqrt()).abs() < 1e-8);
    assert!((c.gain - 10.0 / (2.0 * PI)).abs() < 1e-12);
    assert!((c.turing_margin - (c.gain / 3.0 - 1.0)).abs() < 1e-10);
    // the static threshold does not depend on v
    for inv_v in [1.0, 0.1] {
        let m = WaveModel { inv_v, ..*ctx.model() };
        let other = slow_limit_conditions(&TuringContext::new(m).unwrap()).unwrap();
        assert!((other.turing_margin - c.turing_margin).abs() < 1e-6);
    }
    let neg = WaveModel { w: SpatialKernel::new(-1.0, 0.5, -1.0).unwrap(), ..*ctx.model() };
    let neg_ctx = TuringContext::with_period(neg, 2.0 * PI).unwrap();
    assert!(slow_limit_conditions(&neg_ctx).is_err());
}

#[test]
fn planar_spectrum_translation_zero() {
    let model = WaveModel::new(
        SynapseKernel::new(1.0).unwrap(),
        SpatialKernel::new(1.0, 2.0, 0.0).unwrap().two_dimensional(),
        Nonlinearity::SmoothExp { r: 1.0, h: -1.0 },
        0.0,
    )
    .unwrap();
    let ctx = TuringContext::new(model).unwrap();
    assert!((ctx.period() - 2.0 * PI * std::f64::consts::E).abs() < 1e-8);
    assert!(spectrum_2d(C64::new(0.0, 0.0), 0.0, &ctx).unwrap().norm() < 1e-10);
}

#[test]
fn zero_rho_wave_spectrum_is_turing_spectrum() {
    let ctx = balanced_ctx(0.5, 45.0);
    let ks = [0.0, 0.5, 1.0 / 2f64.sqrt()];
    let region = Region::new(-1.0, 1.0, -2.0, 2.0);
    let a = spectrum(&ks, &ctx, region, 80);
    let b = wave_spectrum(&ks, &ctx.wave, region, 80);
    assert_eq!(a.max_real().map(|x| x > 0.0), b.max_real().map(|x| x > 0.0));
    assert!(a.max_real().unwrap() > 0.0);
    let g = script_g_exact(C64::new(0.0, 0.0), 2.0 * PI, 0.0, &SynapseKernel::new(0.5).unwrap());
    assert!(g.re > 0.0);
}
