//! Localised bumps with a Heaviside nonlinearity: Amari rate bumps and
//! spiking bumps with firing times `T^m(x) = 2 pi m + rho |x|`.
//!
//! Spiking bumps fire with unit phase velocity, so the period is `2 pi`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::field::{Dimension, SpatialKernel};
use crate::kernels::SynapseKernel;
use crate::numeric::levelset::Region;
use crate::numeric::roots::{all_roots, brent};
use crate::numeric::wrap;
use crate::synchrony::{find_spectrum, Classification, SpectralPoint, SpectrumResult};
use crate::{config_err, Error, Result, C64};

const TWO_PI: f64 = 2.0 * PI;

/// Dense samples of `t` in the search for `t*`.
pub const T_STAR_SAMPLES: usize = 1024;
/// Default harmonic truncation.
pub const DEFAULT_M: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BumpBranch {
    /// `dh/dDelta < 0` (upper branch).
    Wide,
    /// `dh/dDelta > 0` (lower branch).
    Narrow,
}

impl BumpBranch {
    pub fn label(&self) -> &'static str {
        match self {
            BumpBranch::Wide => "wide",
            BumpBranch::Narrow => "narrow",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBump {
    pub delta: f64,
    pub h: f64,
    pub branch: BumpBranch,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpikeBump {
    pub delta: f64,
    pub rho: f64,
    pub t_star: f64,
    pub harmonics: usize,
    pub branch: BumpBranch,
    pub h: f64,
    pub alpha: f64,
}

fn check_1d(w: &SpatialKernel) -> Result<()> {
    if w.dim != Dimension::One {
        return Err(config_err("bumps need a one-dimensional kernel"));
    }
    Ok(())
}

/// Default upper end of the width search.
pub fn default_delta_max(w: &SpatialKernel) -> f64 {
    20.0 * w.sigma.max(1.0)
}

/// Roots of `h = (1/2 pi) int_0^Delta w(y) dy` on `(0, Delta_max]`.
pub fn rate_bump_width(h: f64, w: &SpatialKernel) -> Result<Vec<RateBump>> {
    rate_bump_width_with(h, w, default_delta_max(w))
}

pub fn rate_bump_width_with(h: f64, w: &SpatialKernel, delta_max: f64) -> Result<Vec<RateBump>> {
    check_1d(w)?;
    if w.eval(0.0) <= 0.0 {
        return Err(config_err("rate bumps need w(0) > 0"));
    }
    let f = |d: f64| w.cumulative(d) / TWO_PI - h;
    Ok(all_roots(f, 1e-9 * delta_max, delta_max, 8000, 1e-15)
        .into_iter()
        .map(|delta| RateBump { delta, h, branch: if w.eval(delta) < 0.0 { BumpBranch::Wide } else { BumpBranch::Narrow } })
        .collect())
}

/// Roots of `(1 + lambda/alpha)^2 = (w(0) +- w(Delta)) / (w(0) - w(Delta))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBumpSpectrum {
    pub plus: [C64; 2],
    pub minus: [C64; 2],
}

impl RateBumpSpectrum {
    pub fn is_stable(&self) -> bool {
        self.plus.iter().chain(self.minus.iter()).all(|l| l.re < 1e-12)
    }
}

pub fn rate_bump_spectrum(bump: &RateBump, w: &SpatialKernel, alpha: f64) -> Result<RateBumpSpectrum> {
    let (w0, wd) = (w.eval(0.0), w.eval(bump.delta));
    if (w0 - wd).abs() < 1e-14 * w0.abs().max(1.0) {
        return Err(Error::DegenerateEdges);
    }
    let roots = |c: f64| {
        let r = C64::new(c, 0.0).sqrt();
        [(r - 1.0) * alpha, (-r - 1.0) * alpha]
    };
    Ok(RateBumpSpectrum { plus: roots((w0 + wd) / (w0 - wd)), minus: roots(1.0) })
}

/// `G(k) = int_{-Delta/2}^{Delta/2} w(|Delta/2 - y|) exp(-i k |y|) dy`, in closed form.
pub fn edge_transform_g(k: C64, delta: f64, w: &SpatialKernel) -> Result<C64> {
    let ik = C64::i() * k;
    let ph = (-ik * (delta / 2.0)).exp();
    let mut acc = C64::new(0.0, 0.0);
    for (c, s) in w.components() {
        let (d1, d2) = (ik + 1.0 / s, ik - 1.0 / s);
        if d1.norm() < 1e-12 || d2.norm() < 1e-12 {
            return Err(Error::Pole("edge transform"));
        }
        let a = (-delta / (2.0 * s)).exp();
        let b = (-delta / s).exp();
        acc += ((C64::new(a, 0.0) - ph * b) / d1 - (ph - a) / d2) * (c / (2.0 * s));
    }
    Ok(acc)
}

/// Alias matching the symbol `G` of the width equation.
#[allow(non_snake_case)]
pub fn edge_transform_G(k: C64, delta: f64, w: &SpatialKernel) -> Result<C64> {
    edge_transform_g(k, delta, w)
}

/// Truncated Fourier series of the edge drive `psi(Delta/2, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeDrive {
    pub mean: f64,
    /// `c_n = eta_hat(n) G(rho n) / (2 pi)` for `n = 1..=M`.
    pub coeffs: Vec<C64>,
}

impl EdgeDrive {
    pub fn new(delta: f64, rho: f64, w: &SpatialKernel, alpha: f64, m: usize) -> Result<Self> {
        let kernel = SynapseKernel::new(alpha)?;
        let mean = w.cumulative(delta) / TWO_PI;
        let coeffs = (1..=m)
            .map(|n| Ok(kernel.fourier_unchecked(C64::new(n as f64, 0.0)) * edge_transform_g(C64::new(rho * n as f64, 0.0), delta, w)? / TWO_PI))
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeDrive { mean, coeffs })
    }

    fn sum(&self, t: f64, power: i32) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let n = (j + 1) as f64;
            let f = match power {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, n),
                _ => C64::new(-n * n, 0.0),
            };
            acc += c * f * C64::from_polar(1.0, n * t);
        }
        2.0 * acc.re
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.mean + self.sum(t, 0)
    }

    pub fn dt(&self, t: f64) -> f64 {
        self.sum(t, 1)
    }

    pub fn dtt(&self, t: f64) -> f64 {
        self.sum(t, 2)
    }

    /// Global minimiser on `[0, 2 pi)`: dense scan then Newton on `psi_t = 0`.
    /// A flat drive returns 0.
    pub fn t_star(&self) -> f64 {
        let amp: f64 = self.coeffs.iter().map(|c| c.norm()).sum();
        if amp < 1e-15 * self.mean.abs().max(1e-300) {
            return 0.0;
        }
        let mut best = 0;
        let mut best_v = f64::INFINITY;
        for i in 0..T_STAR_SAMPLES {
            let v = self.eval(TWO_PI * i as f64 / T_STAR_SAMPLES as f64);
            if v < best_v {
                best_v = v;
                best = i;
            }
        }
        let h = TWO_PI / T_STAR_SAMPLES as f64;
        let mut t = best as f64 * h;
        for _ in 0..50 {
            let d2 = self.dtt(t);
            if d2 <= 0.0 {
                break;
            }
            let step = self.dt(t) / d2;
            t -= step.clamp(-h, h);
            if step.abs() < 1e-15 {
                break;
            }
        }
        if self.dt(t).abs() > 1e-10 {
            let a = best as f64 * h - h;
            let b = best as f64 * h + h;
            if let Ok(r) = brent(|s| self.dt(s), a, b, 1e-15) {
                t = r;
            }
        }
        wrap(t, TWO_PI)
    }

    pub fn min(&self) -> f64 {
        self.eval(self.t_star())
    }
}

/// Phase `t*` of the minimum edge drive.
pub fn t_star(delta: f64, rho: f64, w: &SpatialKernel, alpha: f64, m: usize) -> Result<f64> {
    Ok(EdgeDrive::new(delta, rho, w, alpha, m)?.t_star())
}

/// Widths with `min_t psi(Delta/2, t) = h`, scanning `(0, Delta_max]`.
pub fn spike_bump_solve(rho: f64, h: f64, w: &SpatialKernel, alpha: f64, m: usize) -> Result<Vec<SpikeBump>> {
    spike_bump_solve_with(rho, h, w, alpha, m, default_delta_max(w), 800)
}

pub fn spike_bump_solve_with(
    rho: f64,
    h: f64,
    w: &SpatialKernel,
    alpha: f64,
    m: usize,
    delta_max: f64,
    scan: usize,
) -> Result<Vec<SpikeBump>> {
    check_1d(w)?;
    if w.eval(0.0) <= 0.0 {
        return Err(config_err("bumps need w(0) > 0"));
    }
    let f = |d: f64| EdgeDrive::new(d, rho, w, alpha, m).map(|e| e.min() - h).unwrap_or(f64::NAN);
    let lo = 1e-6 * delta_max;
    let step = (delta_max - lo) / scan as f64;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=scan {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && (fa < 0.0) != (fb < 0.0) {
            let delta = brent(f, a, b, 1e-14)?;
            let e = EdgeDrive::new(delta, rho, w, alpha, m)?;
            let slope = fb - fa;
            out.push(SpikeBump {
                delta,
                rho,
                t_star: e.t_star(),
                harmonics: m,
                branch: if slope < 0.0 { BumpBranch::Wide } else { BumpBranch::Narrow },
                h,
                alpha,
            });
        }
        a = b;
        fa = fb;
    }
    if out.is_empty() {
        return Err(Error::NoSolution("no bump width in the scanned range"));
    }
    Ok(out)
}

/// `Q(lambda) = sum_{j >= 0} eta(s + 2 pi j) exp(-lambda (s + 2 pi j))`, `s = phi mod 2 pi`.
///
/// `2 pi Q(lambda)` is the comb sum `sum_p eta_hat(p - i lambda) exp(i p phi)`.
pub fn comb_sum(lambda: C64, phi: f64, alpha: f64) -> C64 {
    let s = wrap(phi, TWO_PI);
    let z = (-(lambda + alpha) * TWO_PI).exp();
    let one = C64::new(1.0, 0.0);
    (-(lambda + alpha) * s).exp() * alpha * alpha * (one * s / (one - z) + z * TWO_PI / ((one - z) * (one - z)))
}

/// The comb sum `sum_{|p| <= M} eta_hat(p - i lambda) exp(i p phi)` over `2 pi`.
pub fn comb_sum_truncated(lambda: C64, phi: f64, alpha: f64, m: usize) -> C64 {
    let kernel = SynapseKernel { alpha };
    let m = m as i64;
    (-m..=m)
        .map(|p| kernel.fourier_unchecked(C64::new(p as f64, 0.0) - C64::i() * lambda) * C64::from_polar(1.0, p as f64 * phi))
        .sum::<C64>()
        / TWO_PI
}

/// Edge data entering `E_+-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpEdge {
    pub phi: f64,
    pub alpha: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub q0: f64,
}

impl BumpEdge {
    pub fn new(bump: &SpikeBump, w: &SpatialKernel) -> Result<Self> {
        let (w0, wd) = (w.eval(0.0), w.eval(bump.delta));
        if !(w0 > wd) {
            return Err(Error::DegenerateEdges);
        }
        let e = EdgeDrive::new(bump.delta, bump.rho, w, bump.alpha, bump.harmonics)?;
        if e.dt(bump.t_star).abs() > 1e-8 {
            return Err(Error::NoSolution("psi_t does not vanish at t*"));
        }
        let phi = bump.t_star - bump.rho * bump.delta / 2.0;
        let q0 = comb_sum(C64::new(0.0, 0.0), phi, bump.alpha).re;
        Ok(BumpEdge { phi, alpha: bump.alpha, c_plus: (w0 + wd) / (w0 - wd), c_minus: 1.0, q0 })
    }

    /// `E_+-(lambda) = 1 - c_+- Q(lambda) / Q(0)`.
    pub fn e(&self, lambda: C64, plus: bool) -> C64 {
        let c = if plus { self.c_plus } else { self.c_minus };
        C64::new(1.0, 0.0) - comb_sum(lambda, self.phi, self.alpha) * (c / self.q0)
    }

    /// `E_+-` times `(1 - z)^2 Q(0)`, `z = exp(-2 pi (lambda + alpha))`: entire, same zeros.
    pub fn e_regular(&self, lambda: C64, plus: bool) -> C64 {
        let c = if plus { self.c_plus } else { self.c_minus };
        let s = wrap(self.phi, TWO_PI);
        let one = C64::new(1.0, 0.0);
        let z = (-(lambda + self.alpha) * TWO_PI).exp();
        let num = (-(lambda + self.alpha) * s).exp() * self.alpha * self.alpha * ((one - z) * s + z * TWO_PI);
        (one - z) * (one - z) * self.q0 - num * c
    }
}

/// Spectra of both edge branches.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpSpectrum {
    pub plus: SpectrumResult,
    pub minus: SpectrumResult,
}

impl BumpSpectrum {
    pub fn max_real(&self) -> Option<f64> {
        match (self.plus.max_real(), self.minus.max_real()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn is_stable(&self) -> bool {
        self.plus.is_stable() && self.minus.is_stable()
    }
}

/// Default search rectangle for bump spectra.
pub fn default_bump_region(alpha: f64) -> Region {
    Region::new(-0.9 * alpha, 2.0, -4.0, 4.0)
}

/// Zeros of `E_+` and `E_-`; the translation zero of `E_-` is attached explicitly.
pub fn spike_bump_spectrum(bump: &SpikeBump, w: &SpatialKernel, region: Region, grid: usize) -> Result<BumpSpectrum> {
    let edge = BumpEdge::new(bump, w)?;
    let branch = |plus: bool| {
        let mut pts = Vec::new();
        if !plus {
            pts.push(SpectralPoint { lambda: C64::new(0.0, 0.0), mode: 1, residual: edge.e(C64::new(0.0, 0.0), false).norm(), class: Classification::TranslationZero });
        }
        for z in find_spectrum(|l| edge.e_regular(l, plus), region, grid, grid) {
            if !plus && z.z.norm() < 1e-7 {
                continue;
            }
            let class = if z.z.re < 0.0 { Classification::Stable } else { Classification::Unstable };
            pts.push(SpectralPoint { lambda: z.z, mode: if plus { 0 } else { 1 }, residual: edge.e(z.z, plus).norm(), class });
        }
        pts.sort_by(|a, b| b.lambda.re.partial_cmp(&a.lambda.re).unwrap_or(core::cmp::Ordering::Equal));
        SpectrumResult { eigenvalues: pts, trivial: vec![], region }
    };
    Ok(BumpSpectrum { plus: branch(true), minus: branch(false) })
}

/// `psi(x, t)` of a spiking bump by quadrature over the active set (exact `P`).
pub fn bump_drive_quadrature(x: f64, t: f64, bump: &SpikeBump, w: &SpatialKernel) -> f64 {
    let half = bump.delta / 2.0;
    let alpha = bump.alpha;
    let p = |t: f64| comb_sum(C64::new(0.0, 0.0), t, alpha).re;
    let f = |y: f64| w.eval(x - y) * p(t - bump.rho * y.abs());
    let mut cuts = vec![-half, 0.0, half];
    if x > -half && x < half {
        cuts.push(x);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    cuts.dedup();
    cuts.windows(2).map(|c| crate::numeric::quad::integrate(f, c[0], c[1], 1e-13)).sum()
}
