//! Haken's Lighthouse model of spiking neural networks.
//!
//! Simulation on graphs and on a periodic 1D continuum, plus the analytic
//! apparatus for its coherent states: emergent periods, firing-time
//! spectra, master stability functions, travelling-wave dispersion,
//! Turing thresholds and localised bumps.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// With std linked (test builds) the float methods are inherent and the
// `num_traits::Float` imports read as unused.
#![allow(unused_imports)]

extern crate alloc;

pub mod bumps;
pub mod field;
pub mod kernels;
pub mod msf;
pub mod network;
pub mod numeric;
pub mod simulator;
pub mod synchrony;
pub mod turing;
pub mod waves;

pub use num_complex::Complex64 as C64;

use core::fmt;

/// Failures reported by the library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A transform was evaluated at (or next to) one of its poles.
    Pole(&'static str),
    /// A derivative of the Heaviside nonlinearity was requested numerically.
    DistributionalDerivative,
    /// The eigenvector matrix is too ill-conditioned to trust the modal split.
    NonDiagonalisable { condition: f64 },
    /// Invalid parameters or simulation settings.
    Config(alloc::string::String),
    /// A bracketed solve found no sign change.
    NoRoot(&'static str),
    /// A closed form does not apply for the given parameters.
    Infeasible(&'static str),
    /// The simulation horizon is too short for the delay history.
    Buffer(&'static str),
    /// The phase velocity at firing is (numerically) zero.
    DegenerateCrossing,
    /// A fractional power was requested across its branch cut.
    Branch,
    /// An iterative solve failed to converge.
    NoSolution(&'static str),
    /// Other modes are already unstable at the candidate point.
    NotCritical,
    /// The bump edge gradients vanish (`w(0) = w(Delta)`).
    DegenerateEdges,
    /// Explicit time stepping would violate its stability bound.
    Unstable(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole(what) => write!(f, "pole encountered in {what}"),
            Error::DistributionalDerivative => write!(f, "derivative of the Heaviside nonlinearity is distributional"),
            Error::NonDiagonalisable { condition } => {
                write!(f, "weight matrix is not safely diagonalisable (condition number {condition:.3e})")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NoRoot(msg) => write!(f, "no root: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Buffer(msg) => write!(f, "delay buffer: {msg}"),
            Error::DegenerateCrossing => write!(f, "phase velocity at firing is zero (grazing)"),
            Error::Branch => write!(f, "argument lies on the branch cut"),
            Error::NoSolution(msg) => write!(f, "no solution: {msg}"),
            Error::NotCritical => write!(f, "other modes are already unstable"),
            Error::DegenerateEdges => write!(f, "bump edges have zero gradient"),
            Error::Unstable(msg) => write!(f, "step size violates stability bound: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn config_err(msg: &str) -> Error {
    Error::Config(alloc::string::String::from(msg))
}
