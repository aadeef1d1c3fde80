//! Periodic travelling waves `T^m(x) = m T + rho x` of the continuum model
//! and their linear stability.
//!
//! The wave-frame drive `psi(xi; T, rho)` is held as Fourier coefficients
//! and sampled on a uniform grid by FFT. With no axonal delay and `rho = 0`
//! the drive is `w_hat(0) P(xi)`, whose series converges slowly, so the
//! closed-form lattice sum is used there instead.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::field::{Dimension, SpatialKernel};
use crate::kernels::{Nonlinearity, SynapseKernel};
use crate::numeric::fft::fft_in_place;
use crate::numeric::levelset::{find_zeros, Region, Zero};
use crate::numeric::roots::brent;
use crate::synchrony::{rotation_integral, script_g_exact, PeriodicDrive};
use crate::{config_err, Error, Result, C64};

const TWO_PI: f64 = 2.0 * PI;

/// Samples per period for drive quadratures.
pub const DEFAULT_SAMPLES: usize = 8192;
/// Harmonics kept in the eigenvalue sums.
pub const DEFAULT_SPECTRAL_HARMONICS: usize = 512;

/// Model pieces shared by every wave of one configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveModel {
    pub kernel: SynapseKernel,
    pub w: SpatialKernel,
    pub s: Nonlinearity,
    /// Inverse axonal speed `1/v` (zero for instantaneous transmission).
    pub inv_v: f64,
}

impl WaveModel {
    pub fn new(kernel: SynapseKernel, w: SpatialKernel, s: Nonlinearity, inv_v: f64) -> Result<Self> {
        s.validate()?;
        if !(inv_v >= 0.0 && inv_v.is_finite()) {
            return Err(config_err("1/v must be finite and non-negative"));
        }
        Ok(WaveModel { kernel, w, s, inv_v })
    }

    /// Whether the delay/gradient bracket is the constant `w_hat(k)`.
    fn flat(&self, rho: f64) -> bool {
        self.inv_v == 0.0 && rho == 0.0
    }

    /// Spatial factor for harmonic `n` at growth rate `lambda` and wavenumber `k`.
    pub fn bracket(&self, n: i64, period: f64, rho: f64, lambda: C64, k: f64) -> Result<C64> {
        let om_n = TWO_PI * n as f64 / period;
        let big = C64::new(om_n, 0.0) - C64::i() * lambda / period;
        match self.w.dim {
            Dimension::One => {
                let shift = k - rho * om_n;
                Ok(self.w.half_fourier(big * self.inv_v - shift)? + self.w.half_fourier(big * self.inv_v + shift)?)
            }
            Dimension::Two => self.w.fourier_2d(k, big * self.inv_v),
        }
    }

    fn flat_bracket(&self, k: f64) -> Result<C64> {
        match self.w.dim {
            Dimension::One => self.w.fourier(C64::new(k, 0.0)),
            Dimension::Two => self.w.fourier_2d(k, C64::new(0.0, 0.0)),
        }
    }

    /// Coefficient `psi_n(T, rho)`.
    pub fn drive_coefficient(&self, n: i64, period: f64, rho: f64) -> Result<C64> {
        let om_n = TWO_PI * n as f64 / period;
        Ok(self.kernel.fourier_unchecked(C64::new(om_n, 0.0)) * self.bracket(n, period, rho, C64::new(0.0, 0.0), 0.0)? / period)
    }
}

/// Drive samples over one period.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveSamples {
    pub period: f64,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
}

/// Sample `psi(xi; T, rho)` and its derivative at `n_samples` points of `[0, T)`.
pub fn sample_drive(model: &WaveModel, period: f64, rho: f64, n_samples: usize) -> Result<DriveSamples> {
    if !n_samples.is_power_of_two() || n_samples < 8 {
        return Err(config_err("sample count must be a power of two >= 8"));
    }
    if model.w.dim == Dimension::Two && rho != 0.0 {
        return Err(config_err("planar waves are only supported for rho = 0"));
    }
    let h = period / n_samples as f64;
    if model.flat(rho) {
        let p = PeriodicDrive::new(period, 0.0, model.kernel)?;
        let g = model.flat_bracket(0.0)?.re;
        let psi = (0..n_samples).map(|j| g * p.eval(j as f64 * h)).collect();
        let dpsi = (0..n_samples).map(|j| g * p.derivative(j as f64 * h)).collect();
        return Ok(DriveSamples { period, psi, dpsi });
    }
    let m = (n_samples / 2 - 1) as i64;
    let mut c = vec![C64::new(0.0, 0.0); n_samples];
    let mut d = vec![C64::new(0.0, 0.0); n_samples];
    for n in -m..=m {
        let cn = model.drive_coefficient(n, period, rho)?;
        let idx = n.rem_euclid(n_samples as i64) as usize;
        c[idx] = cn;
        d[idx] = cn * C64::new(0.0, TWO_PI * n as f64 / period);
    }
    fft_in_place(&mut c, true);
    fft_in_place(&mut d, true);
    Ok(DriveSamples { period, psi: c.iter().map(|z| z.re).collect(), dpsi: d.iter().map(|z| z.re).collect() })
}

/// Point evaluation of `psi(xi; T, rho)` from `m` harmonics (exact in the flat case).
pub fn wave_drive(xi: f64, period: f64, rho: f64, model: &WaveModel, m: usize) -> Result<f64> {
    if model.flat(rho) {
        let p = PeriodicDrive::new(period, 0.0, model.kernel)?;
        return Ok(model.flat_bracket(0.0)?.re * p.eval(xi));
    }
    let mut acc = C64::new(0.0, 0.0);
    let m = m as i64;
    for n in -m..=m {
        acc += model.drive_coefficient(n, period, rho)? * C64::from_polar(1.0, TWO_PI * n as f64 * xi / period);
    }
    Ok(acc.re)
}

/// `int_0^T S(psi(s; T, rho)) ds`.
pub fn rotation(model: &WaveModel, period: f64, rho: f64, n_samples: usize) -> Result<f64> {
    if model.flat(rho) {
        let p = PeriodicDrive::new(period, 0.0, model.kernel)?;
        return Ok(rotation_integral(&model.s, model.flat_bracket(0.0)?.re, &p));
    }
    let d = sample_drive(model, period, rho, n_samples)?;
    let h = period / n_samples as f64;
    Ok(d.psi.iter().map(|&p| model.s.eval(p)).sum::<f64>() * h)
}

/// Periods `T(rho)` with `int_0^T S(psi) = 2 pi`, one per sign change found.
pub fn dispersion_solve(rho: f64, model: &WaveModel) -> Result<Vec<f64>> {
    dispersion_solve_with(rho, model, 1e3, 240)
}

pub fn dispersion_solve_with(rho: f64, model: &WaveModel, t_max: f64, scan: usize) -> Result<Vec<f64>> {
    let sup = model.s.sup();
    let lo = if sup.is_finite() { TWO_PI / sup * (1.0 + 1e-9) } else { 1e-3 };
    let f = |t: f64| rotation(model, t, rho, DEFAULT_SAMPLES).map(|r| TWO_PI - r).unwrap_or(f64::NAN);
    let ratio = (t_max / lo).powf(1.0 / scan as f64);
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for _ in 0..scan {
        let b = a * ratio;
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
            roots.push(brent(f, a, b, 1e-13 * b)?);
        }
        a = b;
        fa = fb;
    }
    if roots.is_empty() {
        return Err(Error::NoRoot("no dispersion root below t_max"));
    }
    Ok(roots)
}

/// A travelling wave (or, for `rho = 0`, the synchronous state) with the
/// data needed for its spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSolution {
    pub model: WaveModel,
    pub rho: f64,
    pub period: f64,
    pub theta_dot: f64,
    pub harmonics: usize,
    drive: DriveSamples,
    a00: C64,
}

impl WaveSolution {
    /// Build from a known period.
    pub fn new(model: WaveModel, rho: f64, period: f64) -> Result<Self> {
        let drive = sample_drive(&model, period, rho, DEFAULT_SAMPLES)?;
        let theta_dot = model.s.eval(drive.psi[0]);
        let mut sol = WaveSolution { model, rho, period, theta_dot, harmonics: DEFAULT_SPECTRAL_HARMONICS, drive, a00: C64::new(0.0, 0.0) };
        sol.a00 = match model.s {
            Nonlinearity::Linear { .. } => C64::new(0.0, 0.0),
            _ => sol.a(C64::new(0.0, 0.0), 0.0)?,
        };
        Ok(sol)
    }

    /// Solve the dispersion relation and return every branch.
    pub fn solve(model: WaveModel, rho: f64) -> Result<Vec<Self>> {
        dispersion_solve(rho, &model)?.into_iter().map(|t| WaveSolution::new(model, rho, t)).collect()
    }

    pub fn with_harmonics(mut self, m: usize) -> Result<Self> {
        self.harmonics = m;
        if !matches!(self.model.s, Nonlinearity::Linear { .. }) {
            self.a00 = self.a(C64::new(0.0, 0.0), 0.0)?;
        }
        Ok(self)
    }

    pub fn drive(&self) -> &DriveSamples {
        &self.drive
    }

    /// `theta(xi) - theta(0)` at the sample points, ending with the full period.
    pub fn theta_profile(&self) -> Vec<f64> {
        let h = self.period / self.drive.psi.len() as f64;
        let mut out = Vec::with_capacity(self.drive.psi.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        let sv: Vec<f64> = self.drive.psi.iter().map(|&p| self.model.s.eval(p)).collect();
        for j in 0..sv.len() {
            let next = sv[(j + 1) % sv.len()];
            acc += 0.5 * h * (sv[j] + next);
            out.push(acc);
        }
        out
    }

    /// `f_n(lambda)` for `|n| <= harmonics`, indexed `n + harmonics`.
    pub fn f_all(&self, lambda: C64) -> Result<Vec<C64>> {
        let m = self.harmonics as i64;
        let e1 = lambda.exp() - 1.0;
        match self.model.s {
            Nonlinearity::Linear { gamma, .. } => Ok(vec![e1 * gamma; (2 * m + 1) as usize]),
            Nonlinearity::Heaviside { .. } => Err(Error::DistributionalDerivative),
            Nonlinearity::SmoothExp { .. } => {
                let ns = self.drive.psi.len();
                let h = self.period / ns as f64;
                let mut g: Vec<C64> = (0..ns)
                    .map(|j| {
                        let p = self.drive.psi[j];
                        let s2 = self.model.s.second(p).unwrap_or(0.0);
                        (lambda * (j as f64 / ns as f64)).exp() * (s2 * self.drive.dpsi[j])
                    })
                    .collect();
                let g0 = g[0];
                fft_in_place(&mut g, true);
                let f_inf = e1 * self.model.s.prime(self.drive.psi[0])?;
                Ok((-m..=m)
                    .map(|n| {
                        let idx = n.rem_euclid(ns as i64) as usize;
                        let j_n = (g[idx] + g0 * e1 * 0.5) * h;
                        f_inf - j_n
                    })
                    .collect())
            }
        }
    }

    /// `f_n(lambda)` for a single harmonic.
    pub fn f_n(&self, n: i64, lambda: C64) -> Result<C64> {
        let all = self.f_all(lambda)?;
        let m = self.harmonics as i64;
        if n.abs() > m {
            return Err(config_err("harmonic index beyond the truncation"));
        }
        Ok(all[(n + m) as usize])
    }

    /// `(1/T) sum_n eta_hat(Omega_n) B_n(lambda, k)`, the linear-S kernel sum.
    pub fn base_sum(&self, lambda: C64, k: f64) -> Result<C64> {
        if self.model.flat(self.rho) {
            return Ok(self.model.flat_bracket(k)? * script_g_exact(lambda, self.period, 0.0, &self.model.kernel));
        }
        let m = self.harmonics as i64;
        let mut acc = C64::new(0.0, 0.0);
        for n in -m..=m {
            acc += self.eta_hat(n, lambda) * self.model.bracket(n, self.period, self.rho, lambda, k)?;
        }
        Ok(acc / self.period)
    }

    fn eta_hat(&self, n: i64, lambda: C64) -> C64 {
        let big = C64::new(TWO_PI * n as f64 / self.period, 0.0) - C64::i() * lambda / self.period;
        self.model.kernel.fourier_unchecked(big)
    }

    /// Eigenvalue `a(lambda, k; rho)` of the linearised firing-time operator.
    pub fn a(&self, lambda: C64, k: f64) -> Result<C64> {
        if let Nonlinearity::Linear { gamma, .. } = self.model.s {
            return Ok((lambda.exp() - 1.0) * gamma * self.base_sum(lambda, k)?);
        }
        let f = self.f_all(lambda)?;
        let m = self.harmonics as i64;
        if self.model.flat(self.rho) {
            let f_inf = (lambda.exp() - 1.0) * self.model.s.prime(self.drive.psi[0])?;
            let mut corr = C64::new(0.0, 0.0);
            for n in -m..=m {
                corr += (f_inf - f[(n + m) as usize]) * self.eta_hat(n, lambda);
            }
            let g = script_g_exact(lambda, self.period, 0.0, &self.model.kernel);
            return Ok(self.model.flat_bracket(k)? * (f_inf * g - corr / self.period));
        }
        let mut acc = C64::new(0.0, 0.0);
        for n in -m..=m {
            acc += f[(n + m) as usize] * self.eta_hat(n, lambda) * self.model.bracket(n, self.period, self.rho, lambda, k)?;
        }
        Ok(acc / self.period)
    }

    /// `E(lambda, k; rho) = (e^lambda - 1) theta_dot - (a(lambda, k) - a(0, 0))`.
    pub fn char_e(&self, lambda: C64, k: f64) -> Result<C64> {
        Ok((lambda.exp() - 1.0) * self.theta_dot - (self.a(lambda, k)? - self.a00))
    }

    /// For linear `S`, `E` divided by `e^lambda - 1`: `theta_dot - gamma base_sum`.
    pub fn char_reduced(&self, lambda: C64, k: f64) -> Result<C64> {
        match self.model.s {
            Nonlinearity::Linear { gamma, .. } => Ok(C64::new(self.theta_dot, 0.0) - self.base_sum(lambda, k)? * gamma),
            _ => Err(Error::Infeasible("the reduced function needs linear S")),
        }
    }

    /// The function whose zeros form the non-trivial spectrum at `k`.
    ///
    /// Linear `S` uses the reduced form (regularised at the synapse poles
    /// in the flat case); otherwise the full `E`.
    pub fn spectral_function(&self, lambda: C64, k: f64) -> C64 {
        let v = match self.model.s {
            Nonlinearity::Linear { .. } => {
                if self.model.flat(self.rho) {
                    let at = self.model.kernel.alpha * self.period;
                    let q = (-at).exp();
                    let z = (-(lambda + at)).exp();
                    let r = (C64::new(1.0, 0.0) - z) / (1.0 - q);
                    self.char_reduced(lambda, k).map(|e| e * r * r)
                } else {
                    self.char_reduced(lambda, k)
                }
            }
            _ => self.char_e(lambda, k),
        };
        v.unwrap_or(C64::new(f64::NAN, f64::NAN))
    }
}

/// Free-function form of [`WaveSolution::f_n`].
pub fn f_n(n: i64, lambda: C64, wave: &WaveSolution) -> Result<C64> {
    wave.f_n(n, lambda)
}

/// Free-function form of [`WaveSolution::a`].
pub fn wave_eigenvalue_a(lambda: C64, k: f64, wave: &WaveSolution) -> Result<C64> {
    wave.a(lambda, k)
}

/// Roots at one wavenumber.
#[derive(Clone, Debug, PartialEq)]
pub struct KRoots {
    pub k: f64,
    pub roots: Vec<Zero>,
}

/// Spectrum over a wavenumber grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSpectrum {
    pub per_k: Vec<KRoots>,
    pub region: Region,
}

impl WaveSpectrum {
    /// Largest growth rate, ignoring zeros at `lambda in 2 pi i Z` for `k = 0`.
    pub fn max_real(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for kr in &self.per_k {
            for z in &kr.roots {
                if kr.k == 0.0 && z.z.re.abs() < 1e-7 && (z.z.im / TWO_PI - (z.z.im / TWO_PI).round()).abs() < 1e-7 {
                    continue;
                }
                best = Some(best.map_or(z.z.re, |b: f64| b.max(z.z.re)));
            }
        }
        best
    }
}

/// Zeros of the spectral function at each `k`.
pub fn wave_spectrum(ks: &[f64], wave: &WaveSolution, region: Region, grid: usize) -> WaveSpectrum {
    let per_k = ks
        .iter()
        .map(|&k| {
            let mut roots = find_zeros(|l| wave.spectral_function(l, k), region, grid, grid, 1e-11);
            roots.retain(|z| z.residual.is_finite());
            KRoots { k, roots }
        })
        .collect();
    WaveSpectrum { per_k, region }
}
