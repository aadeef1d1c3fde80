//! Turing, Hopf and Turing-Hopf instabilities of synchronous spiking in the
//! continuum model.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::field::{Dimension, SpatialKernel};
use crate::kernels::{Nonlinearity, SynapseKernel};
use crate::numeric::levelset::{find_zeros, Region};
use crate::numeric::roots::{brent, newton_n};
use crate::waves::{dispersion_solve, wave_spectrum, WaveModel, WaveSolution, WaveSpectrum};
use crate::{config_err, Error, Result, C64};

const TWO_PI: f64 = 2.0 * PI;

/// Samples of `k` on `[0, 5 k_c]` in the criticality check.
pub const CHECK_SAMPLES: usize = 512;

/// Synchronous state of a continuum network.
#[derive(Clone, Debug, PartialEq)]
pub struct TuringContext {
    pub wave: WaveSolution,
}

impl TuringContext {
    /// Solve for the synchronous period (smallest root) and build the context.
    pub fn new(model: WaveModel) -> Result<Self> {
        let t = dispersion_solve(0.0, &model)?[0];
        Self::with_period(model, t)
    }

    pub fn with_period(model: WaveModel, period: f64) -> Result<Self> {
        Ok(TuringContext { wave: WaveSolution::new(model, 0.0, period)? })
    }

    pub fn model(&self) -> &WaveModel {
        &self.wave.model
    }

    pub fn period(&self) -> f64 {
        self.wave.period
    }

    pub fn theta_dot(&self) -> f64 {
        self.wave.theta_dot
    }

    /// Function whose zeros are the non-trivial spectrum: `E / (e^lambda - 1)`
    /// for linear `S`, `E` itself otherwise.
    pub fn reduced(&self, lambda: C64, k: f64) -> Result<C64> {
        match self.wave.model.s {
            Nonlinearity::Linear { .. } => self.wave.char_reduced(lambda, k),
            _ => self.wave.char_e(lambda, k),
        }
    }
}

/// `E(lambda, k) = (e^lambda - 1) theta_dot - (a(lambda, k) - a(0, 0))`.
#[allow(non_snake_case)]
pub fn spectrum_E(lambda: C64, k: f64, ctx: &TuringContext) -> Result<C64> {
    ctx.wave.char_e(lambda, k)
}

/// Two-dimensional analogue of [`spectrum_E`] (radial kernel).
pub fn spectrum_2d(lambda: C64, k: f64, ctx: &TuringContext) -> Result<C64> {
    if ctx.wave.model.w.dim != Dimension::Two {
        return Err(config_err("spectrum_2d needs a two-dimensional kernel"));
    }
    ctx.wave.char_e(lambda, k)
}

/// Zeros of the non-trivial spectrum at each `k`.
pub fn spectrum(ks: &[f64], ctx: &TuringContext, region: Region, grid: usize) -> WaveSpectrum {
    wave_spectrum(ks, &ctx.wave, region, grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BifurcationKind {
    StaticTuring,
    Hopf,
    TuringHopf,
}

impl BifurcationKind {
    pub fn label(&self) -> &'static str {
        match self {
            BifurcationKind::StaticTuring => "static-turing",
            BifurcationKind::Hopf => "hopf",
            BifurcationKind::TuringHopf => "turing-hopf",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BifurcationPoint {
    pub kind: BifurcationKind,
    pub k_c: f64,
    pub omega_c: f64,
    pub param: String,
    pub value: f64,
    /// Max-norm of the defining equations at the point.
    pub residual: f64,
    /// Tangency determinant (Turing-Hopf only, else 0).
    pub tangency: f64,
}

/// `P(T) = alpha^2 T q / (1 - q)^2`, the zero-delay drive at firing.
pub fn drive_at_firing(alpha: f64, period: f64) -> f64 {
    let q = (-alpha * period).exp();
    alpha * alpha * period * q / ((1.0 - q) * (1.0 - q))
}

/// Closed-form static Turing point for a balanced network with linear `S`.
///
/// `k_c = 1/sqrt(sigma)`, `T = -2 pi / Theta`, `gamma_c = -Theta / (w_hat(k_c) P(T))`.
pub fn static_turing_point(w: &SpatialKernel, kernel: &SynapseKernel, theta: f64) -> Result<BifurcationPoint> {
    if w.total.abs() > 1e-12 {
        return Err(Error::Infeasible("static Turing closed form needs a balanced kernel"));
    }
    if !(theta < 0.0) {
        return Err(Error::Infeasible("static Turing closed form needs Theta < 0"));
    }
    let k_c = 1.0 / w.sigma.sqrt();
    let wk = match w.dim {
        Dimension::One => w.fourier_real(k_c),
        Dimension::Two => w.fourier_2d(k_c, C64::new(0.0, 0.0))?.re,
    };
    if wk <= 0.0 {
        return Err(Error::Infeasible("w_hat(k_c) <= 0"));
    }
    let t = -TWO_PI / theta;
    let gamma_c = -theta / (wk * drive_at_firing(kernel.alpha, t));
    Ok(BifurcationPoint { kind: BifurcationKind::StaticTuring, k_c, omega_c: 0.0, param: "gamma".into(), value: gamma_c, residual: 0.0, tangency: 0.0 })
}

/// [`static_turing_point`] for a context with linear `S` and instantaneous transmission.
pub fn static_turing(ctx: &TuringContext) -> Result<BifurcationPoint> {
    let m = ctx.model();
    let Nonlinearity::Linear { theta, .. } = m.s else {
        return Err(Error::Infeasible("static Turing closed form needs linear S"));
    };
    if m.inv_v != 0.0 {
        return Err(Error::Infeasible("static Turing closed form needs 1/v = 0"));
    }
    static_turing_point(&m.w, &m.kernel, theta)
}

/// Critical curve `gamma_c(alpha)` of the balanced linear network.
pub fn critical_curve(w: &SpatialKernel, theta: f64, alphas: &[f64]) -> Result<Vec<BifurcationPoint>> {
    alphas.iter().map(|&a| static_turing_point(w, &SynapseKernel::new(a)?, theta)).collect()
}

/// Initial guess for [`find_bifurcation`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BifurcationSeed {
    pub k: f64,
    pub omega: f64,
    pub value: f64,
}

fn dk(f: &dyn Fn(f64) -> f64, k: f64) -> f64 {
    let h = 1e-5 * k.abs().max(1e-2);
    (f(k + h) - f(k - h)) / (2.0 * h)
}

/// Locate a bifurcation in the free parameter `name`, with `build` mapping a
/// parameter value to its context.
///
/// Static: `{Re g(0,k), d_k Re g(0,k)} = 0` in `(k, a)`. Hopf:
/// `{Re, Im} g(i w, 0) = 0` in `(w, a)`. Turing-Hopf adds the tangency
/// determinant in `(w, k, a)`. Here `g` is [`TuringContext::reduced`].
/// Afterwards `g(lambda, k)` is checked for zeros with `Re lambda > 0`.
pub fn find_bifurcation<B: Fn(f64) -> Result<TuringContext>>(
    kind: BifurcationKind,
    name: &str,
    seed: BifurcationSeed,
    build: B,
) -> Result<BifurcationPoint> {
    let g = |lambda: C64, k: f64, a: f64| -> C64 {
        build(a).and_then(|c| c.reduced(lambda, k)).unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let tol = 1e-10;
    let (k_c, omega_c, value, tangency) = match kind {
        BifurcationKind::StaticTuring => {
            let sys = |x: &[f64]| {
                let ctx = build(x[1]);
                let Ok(ctx) = ctx else { return alloc::vec![f64::NAN, f64::NAN] };
                let re = |k: f64| ctx.reduced(C64::new(0.0, 0.0), k).map(|z| z.re).unwrap_or(f64::NAN);
                alloc::vec![re(x[0]), dk(&re, x[0])]
            };
            let x = newton_n(sys, &[seed.k, seed.value], tol, 60).ok_or(Error::NoSolution("static Turing Newton failed"))?;
            (x[0].abs(), 0.0, x[1], 0.0)
        }
        BifurcationKind::Hopf => {
            let sys = |x: &[f64]| {
                let z = g(C64::new(0.0, x[0]), 0.0, x[1]);
                alloc::vec![z.re, z.im]
            };
            let x = newton_n(sys, &[seed.omega, seed.value], tol, 60).ok_or(Error::NoSolution("Hopf Newton failed"))?;
            (0.0, x[0], x[1], 0.0)
        }
        BifurcationKind::TuringHopf => {
            let sys = |x: &[f64]| {
                let Ok(ctx) = build(x[2]) else { return alloc::vec![f64::NAN; 3] };
                let e = |w: f64, k: f64| ctx.reduced(C64::new(0.0, w), k).unwrap_or(C64::new(f64::NAN, f64::NAN));
                let z = e(x[0], x[1]);
                alloc::vec![z.re, z.im, tangency_det(&e, x[0], x[1])]
            };
            let x = newton_n(sys, &[seed.omega, seed.k, seed.value], tol, 80).ok_or(Error::NoSolution("Turing-Hopf Newton failed"))?;
            let ctx = build(x[2])?;
            let e = |w: f64, k: f64| ctx.reduced(C64::new(0.0, w), k).unwrap_or(C64::new(f64::NAN, f64::NAN));
            (x[1].abs(), x[0], x[2], tangency_det(&e, x[0], x[1]))
        }
    };
    let ctx = build(value)?;
    let residual = match kind {
        BifurcationKind::StaticTuring => ctx.reduced(C64::new(0.0, 0.0), k_c)?.re.abs(),
        _ => ctx.reduced(C64::new(0.0, omega_c), k_c)?.norm(),
    };
    check_critical(&ctx, k_c, kind)?;
    Ok(BifurcationPoint { kind, k_c, omega_c, param: name.into(), value, residual, tangency })
}

/// `det d(Re E, Im E)/d(w, k)` by central differences.
pub fn tangency_det(e: &dyn Fn(f64, f64) -> C64, w: f64, k: f64) -> f64 {
    let hw = 1e-5 * w.abs().max(1e-2);
    let hk = 1e-5 * k.abs().max(1e-2);
    let ew = (e(w + hw, k) - e(w - hw, k)) / (2.0 * hw);
    let ek = (e(w, k + hk) - e(w, k - hk)) / (2.0 * hk);
    ew.re * ek.im - ek.re * ew.im
}

fn check_critical(ctx: &TuringContext, k_c: f64, kind: BifurcationKind) -> Result<()> {
    let k_hi = 5.0 * if k_c > 0.0 { k_c } else { ctx.model().w.k_max().max(1.0 / ctx.model().w.sigma.sqrt()) };
    let scale = ctx.theta_dot().abs().max(1.0);
    for i in 0..=CHECK_SAMPLES {
        let k = k_hi * i as f64 / CHECK_SAMPLES as f64;
        let v = ctx.reduced(C64::new(0.0, 0.0), k)?.re;
        if v < -1e-7 * scale {
            return Err(Error::NotCritical);
        }
    }
    if kind != BifurcationKind::StaticTuring {
        let region = Region::new(1e-4, 2.0, -PI, PI);
        for i in 0..=8 {
            let k = k_hi * i as f64 / 8.0;
            if !find_zeros(|l| ctx.wave.spectral_function(l, k), region, 24, 24, 1e-10).is_empty() {
                return Err(Error::NotCritical);
            }
        }
    }
    Ok(())
}

/// Slow-synapse period: `2 pi / T = S(w_hat(0) / T)`.
pub fn slow_limit_period(w: &SpatialKernel, s: &Nonlinearity) -> Result<f64> {
    let w0 = w.fourier_real(0.0);
    let sup = s.sup();
    let lo = if sup.is_finite() { TWO_PI / sup * (1.0 + 1e-9) } else { 1e-3 };
    let f = |t: f64| t * s.eval(w0 / t) - TWO_PI;
    let n = 400;
    let ratio = (1e4 / lo).powf(1.0 / n as f64);
    let mut a = lo;
    for _ in 0..n {
        let b = a * ratio;
        if f(a).signum() != f(b).signum() {
            return brent(f, a, b, 1e-14 * b);
        }
        a = b;
    }
    Err(Error::NoRoot("no slow-limit period"))
}

/// Slow-synapse gain `S'(w_hat(0)/T) / (2 pi)` and threshold data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlowConditions {
    pub period: f64,
    pub gain: f64,
    pub inv_v: f64,
    pub alpha: f64,
    /// `argmax_k w_hat(k)`.
    pub k_c: f64,
    /// `gain * max_k w_hat(k) - 1`: zero at the Turing threshold.
    pub turing_margin: f64,
}

impl SlowConditions {
    fn lhs(&self, omega: f64) -> C64 {
        let z = C64::new(1.0, omega / (self.alpha * self.period));
        z * z
    }

    /// `1/eta_hat(w/T) - gain w_hat(w/(vT))`: zero at a Hopf point.
    pub fn hopf_residual(&self, omega: f64, w: &SpatialKernel) -> Result<C64> {
        self.turing_hopf_residual(omega, 0.0, w)
    }

    /// `1/eta_hat(w/T) - gain w_hat(k + w/(vT))`.
    pub fn turing_hopf_residual(&self, omega: f64, k: f64, w: &SpatialKernel) -> Result<C64> {
        Ok(self.lhs(omega) - w.fourier(C64::new(k + omega * self.inv_v / self.period, 0.0))? * self.gain)
    }
}

/// Slow-synapse thresholds; `Infeasible` when `w_hat <= 0` everywhere.
pub fn slow_limit_conditions(ctx: &TuringContext) -> Result<SlowConditions> {
    let m = ctx.model();
    let period = slow_limit_period(&m.w, &m.s)?;
    let gain = m.s.prime(m.w.fourier_real(0.0) / period)? / TWO_PI;
    let (max, _) = m.w.fourier_extrema();
    if max <= 0.0 {
        return Err(Error::Infeasible("w_hat(k) <= 0 for all k: no Turing threshold"));
    }
    Ok(SlowConditions { period, gain, inv_v: m.inv_v, alpha: m.kernel.alpha, k_c: m.w.k_max(), turing_margin: gain * max - 1.0 })
}

/// Slow-synapse spectrum at `k`: zeros of
/// `(1 + lambda/(alpha T))^2 - gain w_hat(k - i lambda/(vT))`, with `T` the context period.
pub fn slow_limit_spectrum(k: f64, ctx: &TuringContext) -> Result<Vec<C64>> {
    let m = ctx.model();
    let t = ctx.period();
    let at = m.kernel.alpha * t;
    let gain = m.s.prime(m.w.fourier_real(0.0) / t)? / TWO_PI;
    if m.inv_v == 0.0 {
        let r = (m.w.fourier(C64::new(k, 0.0))? * gain).sqrt();
        return Ok(alloc::vec![(r - 1.0) * at, (-r - 1.0) * at]);
    }
    let f = |l: C64| {
        let z = C64::new(1.0, 0.0) + l / at;
        match m.w.fourier(C64::new(k, 0.0) - C64::i() * l * (m.inv_v / t)) {
            Ok(wk) => z * z - wk * gain,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let region = Region::new(-3.0 * at, at, -4.0 * at, 4.0 * at);
    Ok(find_zeros(f, region, 120, 120, 1e-12).into_iter().map(|z| z.z).collect())
}
