//! The synchronous state on graphs: periodic drive, emergent period and
//! the firing-time spectrum.
//!
//! Lattice sums over past spikes are evaluated in closed form (the
//! alpha-function makes them geometric series); the truncated Fourier
//! representations are kept alongside for cross-checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::kernels::{Nonlinearity, SynapseKernel};
use crate::network::EigenDecomposition;
use crate::numeric::levelset::{find_zeros, newton, Region};
use crate::numeric::quad::integrate;
use crate::numeric::roots::{brent, newton2};
use crate::numeric::wrap;
use crate::{config_err, Error, Result, C64};

const TWO_PI: f64 = 2.0 * PI;

/// Default harmonic truncation `max(200, ceil(20 alpha T))`.
pub fn default_harmonics(alpha: f64, period: f64) -> usize {
    200usize.max((20.0 * alpha * period).ceil() as usize)
}

/// `P(t) = sum_m eta(t - tau - m T)`, the drive produced by a periodic spike train.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicDrive {
    pub period: f64,
    pub tau: f64,
    pub kernel: SynapseKernel,
    pub n_harmonics: usize,
}

/// Truncated Fourier evaluation with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierEval {
    pub value: f64,
    pub imag_residue: f64,
    /// Magnitude of the contribution of the last retained harmonic pair.
    pub tail: f64,
}

impl PeriodicDrive {
    pub fn new(period: f64, tau: f64, kernel: SynapseKernel) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(config_err("period must be positive"));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(config_err("delay must be non-negative"));
        }
        let n_harmonics = default_harmonics(kernel.alpha, period);
        Ok(PeriodicDrive { period, tau, kernel, n_harmonics })
    }

    pub fn with_harmonics(mut self, m: usize) -> Self {
        self.n_harmonics = m;
        self
    }

    fn phase(&self, t: f64) -> f64 {
        let s = wrap(t - self.tau, self.period);
        if s >= self.period {
            0.0
        } else {
            s
        }
    }

    /// Exact value of the lattice sum.
    pub fn eval(&self, t: f64) -> f64 {
        let a = self.kernel.alpha;
        let tt = self.period;
        let q = (-a * tt).exp();
        let s = self.phase(t);
        let om = 1.0 - q;
        a * a * (-a * s).exp() * (s / om + tt * q / (om * om))
    }

    /// Exact time derivative (right derivative at the kink).
    pub fn derivative(&self, t: f64) -> f64 {
        let a = self.kernel.alpha;
        let tt = self.period;
        let q = (-a * tt).exp();
        let s = self.phase(t);
        let om = 1.0 - q;
        a * a * (-a * s).exp() * ((1.0 - a * s) / om - a * tt * q / (om * om))
    }

    /// Fourier coefficient `P_n = eta_hat(omega_n) exp(-i omega_n tau) / T`.
    pub fn coefficient(&self, n: i64) -> C64 {
        let w = TWO_PI * n as f64 / self.period;
        self.kernel.fourier_unchecked(C64::new(w, 0.0)) * C64::from_polar(1.0, -w * self.tau) / self.period
    }

    /// Truncated series `sum_{|n| <= M} P_n exp(i omega_n t)`.
    pub fn eval_fourier(&self, t: f64) -> FourierEval {
        let m = self.n_harmonics as i64;
        let mut acc = C64::new(0.0, 0.0);
        let mut tail = 0.0;
        for n in -m..=m {
            let w = TWO_PI * n as f64 / self.period;
            let term = self.coefficient(n) * C64::from_polar(1.0, w * t);
            if n.abs() == m {
                tail += term.norm();
            }
            acc += term;
        }
        FourierEval { value: acc.re, imag_residue: acc.im.abs(), tail }
    }

    /// Direct (truncated) lattice sum over `n_terms` past periods.
    pub fn eval_lattice(&self, t: f64, n_terms: usize) -> f64 {
        let m0 = ((t - self.tau) / self.period).floor() as i64;
        (0..n_terms as i64).map(|j| self.kernel.eval(t - self.tau - (m0 - j) as f64 * self.period)).sum()
    }

    /// Start of the period where the derivative jumps.
    pub fn kink(&self) -> f64 {
        wrap(self.tau, self.period)
    }
}

/// Free-function form of [`PeriodicDrive::eval_fourier`].
pub fn drive_eval(p: &PeriodicDrive, t: f64) -> FourierEval {
    p.eval_fourier(t)
}

/// `int_0^T S(Gamma P(s)) ds` for the drive of period `T`.
pub fn rotation_integral(s: &Nonlinearity, big_gamma: f64, drive: &PeriodicDrive) -> f64 {
    let tt = drive.period;
    let k = drive.kink();
    let f = |x: f64| s.eval(big_gamma * drive.eval(x));
    if big_gamma == 0.0 {
        return s.eval(0.0) * tt;
    }
    let tol = 1e-13 * tt.max(1.0);
    if k > 0.0 && k < tt {
        integrate(f, 0.0, k, tol) + integrate(f, k, tt, tol)
    } else {
        integrate(f, 0.0, tt, tol)
    }
}

/// Settings for [`solve_period`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodOptions {
    pub t_max: f64,
    pub scan_points: usize,
    pub tol: f64,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions { t_max: 1e4, scan_points: 600, tol: 1e-12 }
    }
}

/// Smallest root `T` of `F(T) = 2 pi - int_0^T S(Gamma P(s)) ds`.
pub fn solve_period(s: &Nonlinearity, big_gamma: f64, kernel: &SynapseKernel, tau: f64) -> Result<f64> {
    solve_period_with(s, big_gamma, kernel, tau, PeriodOptions::default())
}

pub fn solve_period_with(
    s: &Nonlinearity,
    big_gamma: f64,
    kernel: &SynapseKernel,
    tau: f64,
    opts: PeriodOptions,
) -> Result<f64> {
    s.validate()?;
    if big_gamma == 0.0 {
        let s0 = s.eval(0.0);
        if s0 > 0.0 && TWO_PI / s0 <= opts.t_max {
            return Ok(TWO_PI / s0);
        }
        return Err(Error::NoRoot("synchronous drive never reaches threshold"));
    }
    let f = |tt: f64| -> f64 {
        match PeriodicDrive::new(tt, tau, *kernel) {
            Ok(d) => TWO_PI - rotation_integral(s, big_gamma, &d),
            Err(_) => f64::NAN,
        }
    };
    let sup = s.sup();
    let lo = if sup.is_finite() { TWO_PI / sup * (1.0 - 1e-9) } else { 1e-6 };
    if lo >= opts.t_max {
        return Err(Error::NoRoot("no admissible period below t_max"));
    }
    let ratio = (opts.t_max / lo).powf(1.0 / opts.scan_points as f64);
    let mut a = lo;
    let mut fa = f(a);
    for _ in 0..opts.scan_points {
        let b = a * ratio;
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && (fa == 0.0 || fa.signum() != fb.signum()) {
            return brent(f, a, b, opts.tol * b.max(1.0));
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoRoot("no sign change of the period condition up to t_max"))
}

/// Closed-form period `(gamma Gamma - 2 pi) / Theta` for linear `S`.
pub fn period_linear(gamma: f64, big_gamma: f64, theta: f64) -> Result<f64> {
    if theta == 0.0 || !theta.is_finite() {
        return Err(Error::Infeasible("Theta must be non-zero"));
    }
    let t = (gamma * big_gamma - TWO_PI) / theta;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Infeasible("gamma Gamma - 2 pi and Theta must share a sign"));
    }
    Ok(t)
}

/// Exact `script_G(lambda) = sum_p eta(p T - tau) exp(-p lambda)` (analytic continuation).
pub fn script_g_exact(lambda: C64, period: f64, tau: f64, kernel: &SynapseKernel) -> C64 {
    let a = kernel.alpha;
    let p0 = (tau / period).ceil();
    let d = (p0 * period - tau).max(0.0);
    let z = (-(lambda + a * period)).exp();
    let om = C64::new(1.0, 0.0) - z;
    (-(lambda * p0 + a * d)).exp() * a * a * (om.inv() * d + z * period / (om * om))
}

/// Truncated series `(1/T) sum_{|n| <= M} eta_hat(omega_n - i lambda/T) exp(-i (omega_n - i lambda/T) tau)`.
pub fn script_g(lambda: C64, period: f64, tau: f64, kernel: &SynapseKernel, m: usize) -> C64 {
    let m = m as i64;
    let mut acc = C64::new(0.0, 0.0);
    for n in -m..=m {
        let w = C64::new(TWO_PI * n as f64 / period, 0.0) - C64::i() * lambda / period;
        acc += kernel.fourier_unchecked(w) * (-C64::i() * w * tau).exp();
    }
    acc / period
}

/// `G(lambda) = (e^lambda - 1) script_G(lambda)`.
pub fn g_full(lambda: C64, period: f64, tau: f64, kernel: &SynapseKernel) -> C64 {
    (lambda.exp() - 1.0) * script_g_exact(lambda, period, tau, kernel)
}

/// `E_mu(lambda) = theta_dot(T) - gamma w_mu script_G(lambda)`.
pub fn char_function(lambda: C64, w_mu: C64, theta_dot: f64, gamma: f64, period: f64, tau: f64, kernel: &SynapseKernel) -> C64 {
    C64::new(theta_dot, 0.0) - w_mu * gamma * script_g_exact(lambda, period, tau, kernel)
}

/// Free parameters accepted by [`dynamic_instability`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    Gamma,
    Theta,
    RowSum,
    Alpha,
    Tau,
}

/// Synchrony of the linear model `S = gamma x - Theta` on a row-sum network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearSync {
    pub gamma: f64,
    pub theta: f64,
    pub row_sum: f64,
    pub kernel: SynapseKernel,
    pub tau: f64,
    pub period: f64,
    pub theta_dot: f64,
}

impl LinearSync {
    pub fn new(gamma: f64, theta: f64, row_sum: f64, alpha: f64, tau: f64) -> Result<Self> {
        let kernel = SynapseKernel::new(alpha)?;
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(config_err("delay must be non-negative"));
        }
        let period = period_linear(gamma, row_sum, theta)?;
        let drive = PeriodicDrive::new(period, tau, kernel)?;
        let theta_dot = gamma * row_sum * drive.eval(period) - theta;
        Ok(LinearSync { gamma, theta, row_sum, kernel, tau, period, theta_dot })
    }

    pub fn param(&self, p: Param) -> f64 {
        match p {
            Param::Gamma => self.gamma,
            Param::Theta => self.theta,
            Param::RowSum => self.row_sum,
            Param::Alpha => self.kernel.alpha,
            Param::Tau => self.tau,
        }
    }

    pub fn with_param(&self, p: Param, v: f64) -> Result<Self> {
        let (mut g, mut th, mut r, mut a, mut t) = (self.gamma, self.theta, self.row_sum, self.kernel.alpha, self.tau);
        match p {
            Param::Gamma => g = v,
            Param::Theta => th = v,
            Param::RowSum => r = v,
            Param::Alpha => a = v,
            Param::Tau => t = v,
        }
        LinearSync::new(g, th, r, a, t)
    }

    pub fn drive(&self) -> PeriodicDrive {
        PeriodicDrive { period: self.period, tau: self.tau, kernel: self.kernel, n_harmonics: default_harmonics(self.kernel.alpha, self.period) }
    }

    pub fn script_g(&self, lambda: C64) -> C64 {
        script_g_exact(lambda, self.period, self.tau, &self.kernel)
    }

    /// `E_mu(lambda)`.
    pub fn e_mu(&self, lambda: C64, w_mu: C64) -> C64 {
        char_function(lambda, w_mu, self.theta_dot, self.gamma, self.period, self.tau, &self.kernel)
    }

    /// `E_mu` multiplied by `((1 - z) / (1 - q))^2` with `z = exp(-alpha T - lambda)`,
    /// which removes its double poles and leaves the zeros unchanged.
    pub fn e_mu_regular(&self, lambda: C64, w_mu: C64) -> C64 {
        let a = self.kernel.alpha;
        let tt = self.period;
        let q = (-a * tt).exp();
        let p0 = (self.tau / tt).ceil();
        let d = (p0 * tt - self.tau).max(0.0);
        let z = (-(lambda + a * tt)).exp();
        let om = C64::new(1.0, 0.0) - z;
        let g = (-(lambda * p0 + a * d)).exp() * a * a * (om * d + z * tt);
        (om * om * self.theta_dot - w_mu * self.gamma * g) / ((1.0 - q) * (1.0 - q))
    }

    /// Full characteristic function `(e^lambda - 1) E_mu(lambda)`.
    pub fn full_char(&self, lambda: C64, w_mu: C64) -> C64 {
        (lambda.exp() - 1.0) * self.e_mu(lambda, w_mu)
    }
}

/// Verdict attached to each spectral point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    TranslationZero,
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub lambda: C64,
    pub mode: usize,
    pub residual: f64,
    pub class: Classification,
}

/// Eigenvalues found in a search region.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<SpectralPoint>,
    /// Zeros `2 pi i k`, `k != 0`, of the factor `e^lambda - 1`; reported, not classified.
    pub trivial: Vec<C64>,
    pub region: Region,
}

impl SpectrumResult {
    /// Largest real part over classified points other than the translation zero.
    pub fn max_real(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .filter(|p| p.class != Classification::TranslationZero)
            .map(|p| p.lambda.re)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
    }

    pub fn is_stable(&self) -> bool {
        self.eigenvalues.iter().all(|p| p.class != Classification::Unstable)
    }
}

/// Default search rectangle `Re in [-5, 2]`, `Im in [-4 pi, 4 pi]`.
pub const DEFAULT_REGION: Region = Region::new(-5.0, 2.0, -4.0 * PI, 4.0 * PI);
pub const DEFAULT_GRID: usize = 400;

/// Level-set search for zeros of an arbitrary characteristic function.
pub fn find_spectrum<F: FnMut(C64) -> C64>(f: F, region: Region, nx: usize, ny: usize) -> Vec<crate::numeric::levelset::Zero> {
    find_zeros(f, region, nx, ny, 1e-12)
}

fn classify(lambda: C64) -> Classification {
    if lambda.re < 0.0 {
        Classification::Stable
    } else {
        Classification::Unstable
    }
}

/// Spectrum of the synchronous state over every mode of `eig`.
///
/// The mode with eigenvector `(1, ..., 1)` contributes the translation
/// zero; repeated eigenvalues are searched once.
pub fn network_spectrum(ctx: &LinearSync, eig: &EigenDecomposition, region: Region, grid: usize) -> SpectrumResult {
    let uniform = eig.uniform_mode();
    let mut points = Vec::new();
    let mut seen: Vec<C64> = Vec::new();
    points.push(SpectralPoint { lambda: C64::new(0.0, 0.0), mode: uniform, residual: 0.0, class: Classification::TranslationZero });
    for (mu, &w) in eig.eigenvalues.iter().enumerate() {
        if seen.iter().any(|s| (s - w).norm() < 1e-10 * (1.0 + w.norm())) {
            continue;
        }
        seen.push(w);
        for z in mode_spectrum(ctx, w, region, grid) {
            let residual = ctx.e_mu(z.z, w).norm();
            let class = if mu == uniform && z.z.norm() < 1e-8 { Classification::TranslationZero } else { classify(z.z) };
            if class == Classification::TranslationZero {
                continue;
            }
            points.push(SpectralPoint { lambda: z.z, mode: mu, residual, class });
        }
    }
    points.sort_by(|a, b| b.lambda.re.partial_cmp(&a.lambda.re).unwrap_or(core::cmp::Ordering::Equal));
    SpectrumResult { eigenvalues: points, trivial: trivial_roots(region), region }
}

/// Zeros of `E_mu` for a single coupling eigenvalue.
pub fn mode_spectrum(ctx: &LinearSync, w_mu: C64, region: Region, grid: usize) -> Vec<crate::numeric::levelset::Zero> {
    let mut zs = find_spectrum(|l| ctx.e_mu_regular(l, w_mu), region, grid, grid);
    for z in zs.iter_mut() {
        z.residual = ctx.e_mu(z.z, w_mu).norm();
    }
    zs
}

/// Points `2 pi i k`, `k != 0`, inside the region.
pub fn trivial_roots(region: Region) -> Vec<C64> {
    let mut out = Vec::new();
    if region.re_min > 0.0 || region.re_max < 0.0 {
        return out;
    }
    let k0 = (region.im_min / TWO_PI).ceil() as i64;
    let k1 = (region.im_max / TWO_PI).floor() as i64;
    for k in k0..=k1 {
        if k != 0 {
            out.push(C64::new(0.0, TWO_PI * k as f64));
        }
    }
    out
}

/// A point `(omega_c, a_c)` where `E_mu(i omega_c) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub omega: f64,
    pub value: f64,
    pub residual: f64,
}

/// Solve `Re E_mu(i omega) = Im E_mu(i omega) = 0` for `(omega, a)`.
///
/// Starts are seeded on a grid over `omega in (0, 2 pi)` and the supplied
/// parameter range. Only `omega` in `(0, 2 pi)` is reported since the
/// equations are `2 pi`-periodic in `omega`.
pub fn dynamic_instability(ctx: &LinearSync, w_mu: C64, param: Param, range: (f64, f64)) -> Result<Vec<CriticalPoint>> {
    let eval = |om: f64, v: f64| -> (f64, f64) {
        match ctx.with_param(param, v) {
            Ok(c) => {
                let e = c.e_mu(C64::new(0.0, om), w_mu);
                (e.re, e.im)
            }
            Err(_) => (f64::NAN, f64::NAN),
        }
    };
    let mut out: Vec<CriticalPoint> = Vec::new();
    let n_om = 24;
    let n_v = 16;
    for i in 0..n_om {
        let om0 = TWO_PI * (i as f64 + 0.5) / n_om as f64;
        for j in 0..n_v {
            let v0 = range.0 + (range.1 - range.0) * (j as f64 + 0.5) / n_v as f64;
            let Some((om, v)) = newton2(eval, (om0, v0), 1e-12, 60) else { continue };
            let om = wrap(om, TWO_PI);
            if !(1e-6..=TWO_PI - 1e-6).contains(&om) {
                continue;
            }
            let (r1, r2) = eval(om, v);
            let residual = r1.abs().max(r2.abs());
            if !(residual < 1e-10) {
                continue;
            }
            if out.iter().all(|p| (p.omega - om).abs() > 1e-6 || (p.value - v).abs() > 1e-6 * v.abs().max(1.0)) {
                out.push(CriticalPoint { omega: om, value: v, residual });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoSolution("no imaginary-axis crossing found"));
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(core::cmp::Ordering::Equal));
    Ok(out)
}

/// Slow-synapse roots and delay-instability estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct SlowSpectrum {
    pub roots: Vec<C64>,
    /// Value that `-gamma min w_mu / (2 pi) - 1` must reach for a delay-driven instability.
    pub delay_threshold: Option<f64>,
    /// Emergent period of the delay-driven oscillation, about `4 tau`.
    pub period_estimate: Option<f64>,
}

/// Roots of `(1 + lambda/(alpha T))^2 = (gamma w_mu / 2 pi) exp(-lambda tau / T)`.
pub fn slow_spectrum(w_mu: C64, gamma: f64, alpha: f64, period: f64, tau: f64) -> SlowSpectrum {
    let at = alpha * period;
    let c = w_mu * gamma / TWO_PI;
    let r = c.sqrt();
    let seeds = [(r - 1.0) * at, (-r - 1.0) * at];
    let roots = if tau == 0.0 {
        seeds.to_vec()
    } else {
        let mut f = |l: C64| {
            let u = C64::new(1.0, 0.0) + l / at;
            u * u - c * (-l * tau / period).exp()
        };
        let mut out: Vec<C64> = Vec::new();
        for s in seeds {
            if let Some(z) = newton(&mut f, s, 1e-13, 100) {
                if out.iter().all(|o| (o - z.z).norm() > 1e-8) {
                    out.push(z.z);
                }
            }
        }
        out
    };
    let (delay_threshold, period_estimate) = if tau > 0.0 {
        let x = PI / (2.0 * alpha * tau);
        (Some(x * x), Some(4.0 * tau))
    } else {
        (None, None)
    };
    SlowSpectrum { roots, delay_threshold, period_estimate }
}

/// Smallest positive `omega` with `tan(omega tau / T) = 2 x / (1 - x^2)`, `x = omega / (alpha T)`.
pub fn slow_delay_frequency(alpha: f64, period: f64, tau: f64) -> Option<f64> {
    if tau <= 0.0 {
        return None;
    }
    let at = alpha * period;
    let g = |om: f64| om * tau / period - 2.0 * (om / at).atan();
    if tau / period >= 2.0 / at {
        return None;
    }
    let hi = PI * period / tau;
    brent(g, 1e-9 * hi, hi, 1e-14 * hi).ok()
}
