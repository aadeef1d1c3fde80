//! Master stability function of the synchronous orbit.
//!
//! Each node carries `x = (theta, s, u)`. Over one period the variational
//! flow is `exp((A + beta DF) T)`, and the firing event contributes the
//! saltation matrix `K`.

use alloc::vec::Vec;

use nalgebra::Matrix3;
use num_traits::Float;

use crate::network::EigenDecomposition;
use crate::numeric::expm::expm;
use crate::numeric::levelset::Region;
use crate::synchrony::LinearSync;
use crate::{Error, Result, C64};

/// Period, synapse rate and phase velocity at firing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MsfContext {
    pub period: f64,
    pub alpha: f64,
    pub theta_dot: f64,
}

impl MsfContext {
    pub fn new(period: f64, alpha: f64, theta_dot: f64) -> Result<Self> {
        if theta_dot.abs() < 1e-12 {
            return Err(Error::DegenerateCrossing);
        }
        if !(period > 0.0 && alpha > 0.0) {
            return Err(crate::config_err("period and alpha must be positive"));
        }
        Ok(MsfContext { period, alpha, theta_dot })
    }

    /// Context of a linear synchronous state; only zero delay is supported.
    pub fn from_sync(sync: &LinearSync) -> Result<Self> {
        if sync.tau != 0.0 {
            return Err(Error::Infeasible("the master stability function needs zero delay"));
        }
        MsfContext::new(sync.period, sync.kernel.alpha, sync.theta_dot)
    }

    pub fn flow_matrix(&self) -> Matrix3<f64> {
        let a = self.alpha;
        Matrix3::new(0.0, 0.0, 0.0, 0.0, -a, a, 0.0, 0.0, -a)
    }

    pub fn coupling_jacobian(&self) -> Matrix3<f64> {
        let mut m = Matrix3::zeros();
        m[(0, 1)] = 1.0;
        m
    }
}

/// Saltation matrix at the firing event.
pub fn saltation(ctx: &MsfContext) -> Result<Matrix3<f64>> {
    if ctx.theta_dot.abs() < 1e-12 {
        return Err(Error::DegenerateCrossing);
    }
    let c = ctx.alpha * ctx.alpha / ctx.theta_dot;
    let mut k = Matrix3::identity();
    k[(1, 0)] = c;
    k[(2, 0)] = -c;
    Ok(k)
}

fn to_complex(m: &Matrix3<f64>) -> Matrix3<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// `exp((A + beta DF) t)`.
pub fn flow(beta: C64, ctx: &MsfContext, t: f64) -> Matrix3<C64> {
    let b = (to_complex(&ctx.flow_matrix()) + to_complex(&ctx.coupling_jacobian()) * beta) * C64::new(t, 0.0);
    expm(&b)
}

/// `M(beta) = K exp((A + beta DF) T)`.
pub fn monodromy(beta: C64, ctx: &MsfContext) -> Result<Matrix3<C64>> {
    let k = to_complex(&saltation(ctx)?);
    Ok(k * flow(beta, ctx, ctx.period))
}

/// Eigenvalues of `M(beta)`.
pub fn multipliers(beta: C64, ctx: &MsfContext) -> Result<[C64; 3]> {
    let m = monodromy(beta, ctx)?;
    let ev = nalgebra::Schur::new(m).eigenvalues().ok_or(Error::NoSolution("Schur iteration did not converge"))?;
    Ok([ev[0], ev[1], ev[2]])
}

/// `(1/T) ln |m(beta)|` with `m` the spectral radius of `M(beta)`.
pub fn msf_value(beta: C64, ctx: &MsfContext) -> Result<f64> {
    let ev = multipliers(beta, ctx)?;
    let r = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(r.ln() / ctx.period)
}

/// Like [`msf_value`] but with the unit multiplier removed.
///
/// `M(beta)` has the eigenvalue 1 for every `beta` (a shift of all phases
/// along the orbit); the remaining pair carries the transverse stability.
pub fn msf_reduced(beta: C64, ctx: &MsfContext) -> Result<f64> {
    let ev = multipliers(beta, ctx)?;
    let skip = (0..3)
        .min_by(|&i, &j| (ev[i] - 1.0).norm().partial_cmp(&(ev[j] - 1.0).norm()).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    let r = (0..3).filter(|&i| i != skip).map(|i| ev[i].norm()).fold(0.0, f64::max);
    Ok(r.ln() / ctx.period)
}

/// Largest reduced MSF over the non-uniform modes of a network with coupling `gamma`.
pub fn network_msf(ctx: &MsfContext, gamma: f64, eig: &EigenDecomposition) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    let uniform = eig.uniform_mode();
    for (mu, w) in eig.eigenvalues.iter().enumerate() {
        if mu == uniform {
            continue;
        }
        best = best.max(msf_reduced(*w * gamma, ctx)?);
    }
    Ok(best)
}

/// Sampled MSF with its zero contour.
#[derive(Clone, Debug, PartialEq)]
pub struct MsfGrid {
    pub region: Region,
    pub nx: usize,
    pub ny: usize,
    /// Row-major samples: `values[j * (nx + 1) + i]` at `(re_i, im_j)`.
    pub values: Vec<f64>,
    /// Zero-contour segments `((re, im), (re, im))`.
    pub contour: Vec<[(f64, f64); 2]>,
}

impl MsfGrid {
    pub fn re(&self, i: usize) -> f64 {
        self.region.re_min + (self.region.re_max - self.region.re_min) * i as f64 / self.nx as f64
    }

    pub fn im(&self, j: usize) -> f64 {
        self.region.im_min + (self.region.im_max - self.region.im_min) * j as f64 / self.ny as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }
}

/// Reduced MSF sampled on an `(nx + 1) x (ny + 1)` lattice.
pub fn msf_grid(region: Region, nx: usize, ny: usize, ctx: &MsfContext) -> Result<MsfGrid> {
    let mut values = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut g = MsfGrid { region, nx, ny, values: Vec::new(), contour: Vec::new() };
    for j in 0..=ny {
        for i in 0..=nx {
            values.push(msf_reduced(C64::new(g.re(i), g.im(j)), ctx)?);
        }
    }
    g.values = values;
    g.contour = marching_squares(&g);
    Ok(g)
}

fn marching_squares(g: &MsfGrid) -> Vec<[(f64, f64); 2]> {
    let mut segs = Vec::new();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for e in 0..4 {
                let (a, b) = (corners[e], corners[(e + 1) % 4]);
                let (va, vb) = (g.value(a.0, a.1), g.value(b.0, b.1));
                if (va < 0.0) != (vb < 0.0) {
                    let t = va / (va - vb);
                    let x = g.re(a.0) + t * (g.re(b.0) - g.re(a.0));
                    let y = g.im(a.1) + t * (g.im(b.1) - g.im(a.1));
                    pts.push((x, y));
                }
            }
            if pts.len() == 2 {
                segs.push([pts[0], pts[1]]);
            } else if pts.len() == 4 {
                segs.push([pts[0], pts[1]]);
                segs.push([pts[2], pts[3]]);
            }
        }
    }
    segs
}
