//! Synaptic response kernel and firing nonlinearity.
//!
//! The synapse is the alpha function `eta(t) = a^2 t exp(-a t) H(t)`, the
//! Green's function of `Q = (1 + a^-1 d/dt)^2`. The phase drive `S` is one
//! of a smooth thresholded exponential, its mid-range linearisation, or a
//! Heaviside step.

use num_traits::Float;

use crate::numeric::roots::brent;
use crate::{config_err, Error, Result, C64};

/// Alpha-function synapse with rate `alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynapseKernel {
    pub alpha: f64,
}

impl SynapseKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(config_err("alpha must be positive and finite"));
        }
        Ok(SynapseKernel { alpha })
    }

    /// `eta(t)`, zero for `t < 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        a * a * t * (-a * t).exp()
    }

    /// `eta'(t)` (right derivative at the origin).
    pub fn derivative(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let a = self.alpha;
        a * a * (1.0 - a * t) * (-a * t).exp()
    }

    /// `eta_hat(omega) = (1 + i omega / alpha)^-2`, for complex `omega`.
    pub fn fourier(&self, omega: C64) -> Result<C64> {
        let d = C64::new(1.0, 0.0) + C64::i() * omega / self.alpha;
        if d.norm() < 1e-14 {
            return Err(Error::Pole("synapse transform"));
        }
        Ok((d * d).inv())
    }

    /// Transform without the pole check; infinite at the pole.
    pub fn fourier_unchecked(&self, omega: C64) -> C64 {
        let d = C64::new(1.0, 0.0) + C64::i() * omega / self.alpha;
        (d * d).inv()
    }

    /// Symbol of the operator `Q` at growth rate `lambda`: `(1 + lambda/alpha)^2 = 1/eta_hat(-i lambda)`.
    pub fn q_symbol(&self, lambda: C64) -> C64 {
        let d = C64::new(1.0, 0.0) + lambda / self.alpha;
        d * d
    }
}

/// Free-function form of [`SynapseKernel::eval`].
pub fn eta_eval(t: f64, kernel: &SynapseKernel) -> f64 {
    kernel.eval(t)
}

/// Free-function form of [`SynapseKernel::fourier`].
pub fn eta_fourier(omega: C64, kernel: &SynapseKernel) -> Result<C64> {
    kernel.fourier(omega)
}

/// Firing-rate nonlinearity driving the phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Nonlinearity {
    /// `exp(-r / (x - h)^2) H(x - h)`.
    SmoothExp { r: f64, h: f64 },
    /// `gamma x - theta`.
    Linear { gamma: f64, theta: f64 },
    /// `H(x - h)`, zero at `x = h`.
    Heaviside { h: f64 },
}

impl Nonlinearity {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Nonlinearity::SmoothExp { r, h } => r > 0.0 && r.is_finite() && h.is_finite(),
            Nonlinearity::Linear { gamma, theta } => gamma.is_finite() && theta.is_finite(),
            Nonlinearity::Heaviside { h } => h.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(config_err("nonlinearity parameters must be finite (and r > 0)"))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Nonlinearity::SmoothExp { r, h } => {
                if x <= h {
                    0.0
                } else {
                    let d = x - h;
                    (-r / (d * d)).exp()
                }
            }
            Nonlinearity::Linear { gamma, theta } => gamma * x - theta,
            Nonlinearity::Heaviside { h } => {
                if x > h {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn prime(&self, x: f64) -> Result<f64> {
        match *self {
            Nonlinearity::SmoothExp { r, h } => {
                if x <= h {
                    return Ok(0.0);
                }
                let d = x - h;
                Ok(self.eval(x) * 2.0 * r / (d * d * d))
            }
            Nonlinearity::Linear { gamma, .. } => Ok(gamma),
            Nonlinearity::Heaviside { .. } => Err(Error::DistributionalDerivative),
        }
    }

    pub fn second(&self, x: f64) -> Result<f64> {
        match *self {
            Nonlinearity::SmoothExp { r, h } => {
                if x <= h {
                    return Ok(0.0);
                }
                let d = x - h;
                let d2 = d * d;
                let d4 = d2 * d2;
                Ok(self.eval(x) * (4.0 * r * r / (d4 * d2) - 6.0 * r / d4))
            }
            Nonlinearity::Linear { .. } => Ok(0.0),
            Nonlinearity::Heaviside { .. } => Err(Error::DistributionalDerivative),
        }
    }

    /// Least upper bound of `S`; infinite for the linear variant.
    pub fn sup(&self) -> f64 {
        match self {
            Nonlinearity::Linear { .. } => f64::INFINITY,
            _ => 1.0,
        }
    }

    /// Mid-range linearisation `S_L(x) = 1/2 + S'(x_half) (x - x_half)`.
    ///
    /// Only the smooth variant is accepted. `x_half` comes from a bracketed solve.
    pub fn linearize(&self) -> Result<Nonlinearity> {
        let Nonlinearity::SmoothExp { h, .. } = *self else {
            return Err(Error::Infeasible("only the smooth nonlinearity has a mid-range linearisation"));
        };
        let mut hi = h + 1.0;
        while self.eval(hi) < 0.5 {
            hi = h + 2.0 * (hi - h);
        }
        let x_half = brent(|x| self.eval(x) - 0.5, h + 1e-9 * (hi - h), hi, 1e-14)?;
        let gamma = self.prime(x_half)?;
        Ok(Nonlinearity::Linear { gamma, theta: gamma * x_half - 0.5 })
    }

    /// `x_half` with `S(x_half) = 1/2` for the smooth variant.
    pub fn half_point(&self) -> Option<f64> {
        match *self {
            Nonlinearity::SmoothExp { r, h } => Some(h + (r / core::f64::consts::LN_2).sqrt()),
            _ => None,
        }
    }
}

/// Free-function forms mirroring the methods.
pub fn s_eval(x: f64, s: &Nonlinearity) -> f64 {
    s.eval(x)
}

pub fn s_prime(x: f64, s: &Nonlinearity) -> Result<f64> {
    s.prime(x)
}

pub fn s_second(x: f64, s: &Nonlinearity) -> Result<f64> {
    s.second(x)
}

pub fn linearize(s: &Nonlinearity) -> Result<Nonlinearity> {
    s.linearize()
}
