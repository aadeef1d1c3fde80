//! Continuum kernels, the slow-synapse rate field and the brain-wave PDE.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::kernels::Nonlinearity;
use crate::numeric::fft::CircularConvolver;
use crate::numeric::levelset::newton;
use crate::numeric::roots::{all_roots, brent};
use crate::{config_err, Error, Result, C64};

const TWO_PI: f64 = 2.0 * PI;

/// Spatial dimension of a radial kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    One,
    Two,
}

/// Wizard hat `w = A [E(x; 1) - (1 - Gamma/A) E(x; sigma)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialKernel {
    pub amp: f64,
    pub sigma: f64,
    pub total: f64,
    pub dim: Dimension,
}

/// Normalised exponential `E(x; sigma)` in one dimension.
pub fn e1(x: f64, sigma: f64) -> f64 {
    (-x.abs() / sigma).exp() / (2.0 * sigma)
}

/// Radial exponential `E(r; sigma)` in two dimensions.
pub fn e2(r: f64, sigma: f64) -> f64 {
    (-r / sigma).exp() / (2.0 * PI * sigma * sigma)
}

fn check_pole(d: C64) -> Result<C64> {
    if d.norm() < 1e-14 {
        Err(Error::Pole("spatial kernel transform"))
    } else {
        Ok(d)
    }
}

/// `E_hat(k; sigma) = 1 / (1 + sigma^2 k^2)`.
pub fn e1_fourier(k: C64, sigma: f64) -> Result<C64> {
    Ok(check_pole(C64::new(1.0, 0.0) + k * k * (sigma * sigma))?.inv())
}

/// `E_hat_+(k; sigma) = 1 / (2 (1 + i sigma k))`.
pub fn e1_half_fourier(k: C64, sigma: f64) -> Result<C64> {
    Ok((check_pole(C64::new(1.0, 0.0) + C64::i() * k * sigma)? * 2.0).inv())
}

/// Two-dimensional transform `sigma^-2 (1/sigma + i a) / ((1/sigma + i a)^2 + k^2)^(3/2)`.
pub fn e2_fourier(k: f64, a: C64, sigma: f64) -> Result<C64> {
    let b = C64::new(1.0 / sigma, 0.0) + C64::i() * a;
    let z = b * b + k * k;
    if z.im.abs() <= 1e-15 * z.norm() && z.re <= 0.0 {
        return Err(Error::Branch);
    }
    Ok(b / (z * z.sqrt()) / (sigma * sigma))
}

impl SpatialKernel {
    pub fn new(amp: f64, sigma: f64, total: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && amp.is_finite() && total.is_finite()) {
            return Err(config_err("kernel needs sigma > 0 and finite A, Gamma"));
        }
        Ok(SpatialKernel { amp, sigma, total, dim: Dimension::One })
    }

    pub fn two_dimensional(mut self) -> Self {
        self.dim = Dimension::Two;
        self
    }

    /// `(coefficient, length scale)` of each exponential component.
    pub fn components(&self) -> [(f64, f64); 2] {
        [(self.amp, 1.0), (-(self.amp - self.total), self.sigma)]
    }

    /// `w(x)` (1D) or `w(r)` (2D).
    pub fn eval(&self, x: f64) -> f64 {
        self.components()
            .iter()
            .map(|&(c, s)| match self.dim {
                Dimension::One => c * e1(x, s),
                Dimension::Two => c * e2(x.abs(), s),
            })
            .sum()
    }

    /// `w_hat(k)`.
    pub fn fourier(&self, k: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (c, s) in self.components() {
            acc += e1_fourier(k, s)? * c;
        }
        Ok(acc)
    }

    pub fn fourier_real(&self, k: f64) -> f64 {
        self.components().iter().map(|&(c, s)| c / (1.0 + s * s * k * k)).sum()
    }

    /// `d w_hat / dk` on the real axis.
    pub fn fourier_derivative(&self, k: f64) -> f64 {
        self.components()
            .iter()
            .map(|&(c, s)| {
                let d = 1.0 + s * s * k * k;
                -c * 2.0 * s * s * k / (d * d)
            })
            .sum()
    }

    /// Half-space transform `w_hat_+(k) = int_0^inf w(y) exp(-i k y) dy`.
    pub fn half_fourier(&self, k: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (c, s) in self.components() {
            acc += e1_half_fourier(k, s)? * c;
        }
        Ok(acc)
    }

    /// Radial transform `w_hat(k, a)` of the 2D kernel.
    pub fn fourier_2d(&self, k: f64, a: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (c, s) in self.components() {
            acc += e2_fourier(k, a, s)? * c;
        }
        Ok(acc)
    }

    /// `int_0^x w(y) dy` in one dimension (`x >= 0`).
    pub fn cumulative(&self, x: f64) -> f64 {
        self.components().iter().map(|&(c, s)| c * 0.5 * (1.0 - (-x / s).exp())).sum()
    }

    /// Global maximiser of `w_hat` over `k >= 0`.
    pub fn k_max(&self) -> f64 {
        let hi = 50.0 / self.sigma.min(1.0);
        let n = 4000;
        let mut best = 0.0;
        let mut best_v = self.fourier_real(0.0);
        for i in 1..=n {
            let k = hi * i as f64 / n as f64;
            let v = self.fourier_real(k);
            if v > best_v {
                best_v = v;
                best = k;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        let h = hi / n as f64;
        brent(|k| self.fourier_derivative(k), (best - h).max(1e-300), best + h, 1e-15).unwrap_or(best)
    }

    /// `max_k w_hat(k)` and `min_k w_hat(k)` over `k >= 0`.
    pub fn fourier_extrema(&self) -> (f64, f64) {
        let km = self.k_max();
        let max = self.fourier_real(km);
        let hi = 50.0 / self.sigma.min(1.0);
        let mut min = f64::INFINITY;
        for i in 0..=4000 {
            min = min.min(self.fourier_real(hi * i as f64 / 4000.0));
        }
        (max, min)
    }
}

/// Free-function forms.
pub fn w_eval(x: f64, w: &SpatialKernel) -> f64 {
    w.eval(x)
}

pub fn w_fourier(k: C64, w: &SpatialKernel) -> Result<C64> {
    w.fourier(k)
}

pub fn w_half_fourier(k: C64, w: &SpatialKernel) -> Result<C64> {
    w.half_fourier(k)
}

pub fn w2d_fourier(k: f64, a: C64, sigma: f64) -> Result<C64> {
    e2_fourier(k, a, sigma)
}

/// Homogeneous steady states `psi = S(psi) w_hat(0) / (2 pi)`.
pub fn rate_steady_state(s: &Nonlinearity, w: &SpatialKernel) -> Vec<f64> {
    let g = w.total / TWO_PI;
    if let Nonlinearity::Linear { gamma, theta } = *s {
        let d = 1.0 - gamma * g;
        if d == 0.0 {
            return Vec::new();
        }
        return vec![-theta * g / d];
    }
    let f = |p: f64| p - s.eval(p) * g;
    let lo = g.min(0.0);
    let hi = g.max(1.0);
    let mut roots = all_roots(f, lo, hi, 4000, 1e-14);
    if f(hi) == 0.0 && roots.last().is_none_or(|&r| (r - hi).abs() > 1e-12) {
        roots.push(hi);
    }
    roots
}

/// Roots of `(1 + lambda/alpha)^2 = S'(psi) w_hat(k) exp(-lambda tau) / (2 pi)`.
pub fn rate_spectrum(k: f64, psi_bar: f64, s: &Nonlinearity, w: &SpatialKernel, tau: f64, alpha: f64) -> Result<Vec<C64>> {
    let c = C64::new(s.prime(psi_bar)? * w.fourier_real(k) / TWO_PI, 0.0);
    Ok(rate_spectrum_coeff(c, tau, alpha))
}

/// Roots of `(1 + lambda/alpha)^2 = c exp(-lambda tau)`.
pub fn rate_spectrum_coeff(c: C64, tau: f64, alpha: f64) -> Vec<C64> {
    let r = c.sqrt();
    let seeds = [(r - 1.0) * alpha, (-r - 1.0) * alpha];
    if tau == 0.0 {
        return seeds.to_vec();
    }
    let mut f = |l: C64| {
        let u = C64::new(1.0, 0.0) + l / alpha;
        u * u - c * (-l * tau).exp()
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
}

/// Periodic mesh `x_i = -L + i dx`, `dx = 2L / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldDomain {
    pub n_mesh: usize,
    pub half_length: f64,
}

impl FieldDomain {
    pub fn new(n_mesh: usize, half_length: f64) -> Result<Self> {
        if n_mesh < 4 || !(half_length > 0.0) {
            return Err(config_err("field domain needs n_mesh >= 4 and L > 0"));
        }
        Ok(FieldDomain { n_mesh, half_length })
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n_mesh as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.dx()
    }

    /// Shortest periodic distance for a lag of `j` mesh cells.
    pub fn lag_distance(&self, j: usize) -> f64 {
        let j = j % self.n_mesh;
        j.min(self.n_mesh - j) as f64 * self.dx()
    }

    /// `dx * w(lag)` on the periodic lattice, indexed by lag.
    pub fn kernel_weights(&self, w: &SpatialKernel) -> Vec<f64> {
        (0..self.n_mesh).map(|j| w.eval(self.lag_distance(j)) * self.dx()).collect()
    }
}

/// Rate field `Q psi = (2 pi)^-1 w * S(psi(t - tau))` on a periodic mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct RateField {
    pub domain: FieldDomain,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateConfig {
    pub dt: f64,
    pub t_end: f64,
    pub alpha: f64,
    pub tau: f64,
    /// Snapshot interval in steps.
    pub record_every: usize,
}

/// One recorded field.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub psi: Vec<f64>,
}

/// Integrate the rate field with classical RK4; the drive is frozen over
/// each step when a delay is present (read from the history).
pub fn rate_field_simulate(state: &RateField, s: &Nonlinearity, w: &SpatialKernel, cfg: &RateConfig) -> Result<Vec<Snapshot>> {
    if !(cfg.dt > 0.0 && cfg.t_end > 0.0 && cfg.alpha > 0.0 && cfg.tau >= 0.0) {
        return Err(config_err("rate field needs dt, t_end, alpha > 0 and tau >= 0"));
    }
    let n = state.domain.n_mesh;
    if !n.is_power_of_two() || state.psi.len() != n || state.dpsi.len() != n {
        return Err(config_err("mesh must be a power of two matching the state"));
    }
    let mut conv = CircularConvolver::new(&state.domain.kernel_weights(w));
    let a = cfg.alpha;
    let mut drive = |psi: &[f64], out: &mut [f64]| {
        let sp: Vec<f64> = psi.iter().map(|&p| s.eval(p)).collect();
        conv.apply(&sp, out);
        for v in out.iter_mut() {
            *v /= TWO_PI;
        }
    };
    let lag = (cfg.tau / cfg.dt).round() as usize;
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut psi = state.psi.clone();
    let mut dpsi = state.dpsi.clone();
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let every = cfg.record_every.max(1);
    let mut out = vec![Snapshot { t: 0.0, psi: psi.clone() }];
    let mut f = vec![0.0; n];
    let rhs = |p: &[f64], dp: &[f64], f: &[f64], kp: &mut [f64], kd: &mut [f64]| {
        for i in 0..p.len() {
            kp[i] = dp[i];
            kd[i] = a * a * (f[i] - p[i]) - 2.0 * a * dp[i];
        }
    };
    let mut tmp_p = vec![0.0; n];
    let mut tmp_d = vec![0.0; n];
    let mut k = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for step in 0..steps {
        let delayed = lag > 0;
        if delayed {
            history.push(psi.clone());
            let src = if history.len() > lag { &history[history.len() - 1 - lag] } else { &history[0] };
            drive(src, &mut f);
            if history.len() > lag + 1 {
                history.remove(0);
            }
        }
        let stages = [0.0, 0.5, 0.5, 1.0];
        for st in 0..4 {
            if st == 0 {
                tmp_p.copy_from_slice(&psi);
                tmp_d.copy_from_slice(&dpsi);
            } else {
                let c = stages[st] * cfg.dt;
                for i in 0..n {
                    tmp_p[i] = psi[i] + c * k[2 * (st - 1)][i];
                    tmp_d[i] = dpsi[i] + c * k[2 * (st - 1) + 1][i];
                }
            }
            if !delayed {
                drive(&tmp_p, &mut f);
            }
            let (a0, a1) = k.split_at_mut(2 * st + 1);
            rhs(&tmp_p, &tmp_d, &f, &mut a0[2 * st], &mut a1[0]);
        }
        for i in 0..n {
            psi[i] += cfg.dt / 6.0 * (k[0][i] + 2.0 * k[2][i] + 2.0 * k[4][i] + k[6][i]);
            dpsi[i] += cfg.dt / 6.0 * (k[1][i] + 2.0 * k[3][i] + 2.0 * k[5][i] + k[7][i]);
        }
        if (step + 1) % every == 0 {
            out.push(Snapshot { t: (step + 1) as f64 * cfg.dt, psi: psi.clone() });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrainWaveConfig {
    pub domain: FieldDomain,
    pub dt: f64,
    pub t_end: f64,
    pub record_times: Vec<f64>,
}

/// Solve `[(1/sigma + v^-1 d_t)^2 - d_xx] psi = sigma^-1 (1/sigma + v^-1 d_t) s`
/// from rest by explicit leapfrog, the damping term centred in time.
pub fn brainwave_solve_1d<F: FnMut(f64, f64) -> f64>(mut source: F, sigma: f64, v: f64, cfg: &BrainWaveConfig) -> Result<Vec<Snapshot>> {
    let dom = cfg.domain;
    let n = dom.n_mesh;
    let dx = dom.dx();
    let dt = cfg.dt;
    if !(sigma > 0.0 && v > 0.0 && v.is_finite() && dt > 0.0) {
        return Err(config_err("brain-wave solve needs sigma, v, dt > 0 and finite v"));
    }
    let cfl = v * dt / dx;
    if cfl > 1.0 {
        return Err(Error::Unstable("v dt / dx must not exceed 1"));
    }
    let xs: Vec<f64> = (0..n).map(|i| dom.x(i)).collect();
    let v2 = v * v;
    let damp = v / sigma;
    let mass = v2 / (sigma * sigma);
    let mut rhs_at = |t: f64, i: usize| -> f64 {
        let h = 1e-4 * dt;
        let s0 = source(xs[i], t);
        let st = (source(xs[i], t + h) - source(xs[i], t - h)) / (2.0 * h);
        mass * s0 + damp * st
    };
    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    // First step from rest: psi(dt) = dt^2/2 psi_tt(0).
    for i in 0..n {
        cur[i] = 0.5 * dt * dt * rhs_at(0.0, i);
    }
    let steps = (cfg.t_end / dt).round() as usize;
    let mut times: Vec<f64> = cfg.record_times.clone();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let mut out = Vec::new();
    let mut next_rec = 0;
    let mut next = vec![0.0; n];
    let c1 = 1.0 / (dt * dt) + damp / dt;
    let c2 = 1.0 / (dt * dt) - damp / dt;
    for step in 1..steps {
        let tc = step as f64 * dt;
        while next_rec < times.len() && times[next_rec] <= tc + 1e-12 {
            let tt = times[next_rec];
            let frac = ((tt - (tc - dt)) / dt).clamp(0.0, 1.0);
            out.push(Snapshot { t: tt, psi: prev.iter().zip(&cur).map(|(a, b)| a + frac * (b - a)).collect() });
            next_rec += 1;
        }
        for i in 0..n {
            let l = cur[(i + n - 1) % n];
            let r = cur[(i + 1) % n];
            let lap = (l - 2.0 * cur[i] + r) / (dx * dx);
            let rhs = rhs_at(tc, i) + v2 * lap - mass * cur[i] + 2.0 * cur[i] / (dt * dt) - c2 * prev[i];
            next[i] = rhs / c1;
        }
        core::mem::swap(&mut prev, &mut cur);
        core::mem::swap(&mut cur, &mut next);
    }
    let t_last = steps.max(1) as f64 * dt;
    while next_rec < times.len() && times[next_rec] <= t_last + 1e-12 {
        let tt = times[next_rec];
        let frac = ((tt - (t_last - dt)) / dt).clamp(0.0, 1.0);
        out.push(Snapshot { t: tt, psi: prev.iter().zip(&cur).map(|(a, b)| a + frac * (b - a)).collect() });
        next_rec += 1;
    }
    Ok(out)
}
