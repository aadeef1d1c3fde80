//! Zeros of holomorphic functions in a rectangle.
//!
//! The real and imaginary parts are sampled on a grid; any cell in which
//! both change sign is a candidate crossing of the two zero level sets.
//! Candidates are polished by Newton's method with a central-difference
//! derivative and merged when they coincide.

use alloc::vec::Vec;

use crate::C64;

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub const fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Region { re_min, re_max, im_min, im_max }
    }

    pub fn contains(&self, z: C64, slack: f64) -> bool {
        let sx = slack * (self.re_max - self.re_min);
        let sy = slack * (self.im_max - self.im_min);
        z.re >= self.re_min - sx && z.re <= self.re_max + sx && z.im >= self.im_min - sy && z.im <= self.im_max + sy
    }
}

/// A polished zero with the modulus of the function there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub z: C64,
    pub residual: f64,
}

/// Newton polish from `z0`; returns the zero if the residual drops below `tol`.
pub fn newton<F: FnMut(C64) -> C64>(f: &mut F, z0: C64, tol: f64, max_iter: usize) -> Option<Zero> {
    let mut z = z0;
    let mut fz = f(z);
    for _ in 0..max_iter {
        if !(fz.re.is_finite() && fz.im.is_finite()) {
            return None;
        }
        if fz.norm() < tol {
            return Some(Zero { z, residual: fz.norm() });
        }
        let h = 1e-6 * z.norm().max(1.0);
        let d = (f(z + h) - f(z - h)) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() {
            return None;
        }
        let mut step = fz / d;
        // Backtrack when the full step increases the residual.
        let mut accepted = false;
        for _ in 0..20 {
            let zn = z - step;
            let fn_ = f(zn);
            if fn_.norm() < fz.norm() || step.norm() < 1e-15 * z.norm().max(1.0) {
                z = zn;
                fz = fn_;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fz.norm() < tol {
        Some(Zero { z, residual: fz.norm() })
    } else {
        None
    }
}

/// Locate zeros of `f` inside `region` from an `nx` by `ny` cell scan.
pub fn find_zeros<F: FnMut(C64) -> C64>(mut f: F, region: Region, nx: usize, ny: usize, tol: f64) -> Vec<Zero> {
    let dx = (region.re_max - region.re_min) / nx as f64;
    let dy = (region.im_max - region.im_min) / ny as f64;
    let mut grid = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let z = C64::new(region.re_min + i as f64 * dx, region.im_min + j as f64 * dy);
            grid.push(f(z));
        }
    }
    let at = |i: usize, j: usize| grid[j * (nx + 1) + i];
    let mut seeds = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let c = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            if c.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                continue;
            }
            let re_change = c.iter().any(|v| v.re >= 0.0) && c.iter().any(|v| v.re <= 0.0);
            let im_change = c.iter().any(|v| v.im >= 0.0) && c.iter().any(|v| v.im <= 0.0);
            if re_change && im_change {
                seeds.push(C64::new(region.re_min + (i as f64 + 0.5) * dx, region.im_min + (j as f64 + 0.5) * dy));
            }
        }
    }
    let mut zeros: Vec<Zero> = Vec::new();
    for s in seeds {
        if let Some(zero) = newton(&mut f, s, tol, 60) {
            if !region.contains(zero.z, 1e-9) {
                continue;
            }
            if zeros.iter().all(|q| (q.z - zero.z).norm() > 1e-6) {
                zeros.push(zero);
            }
        }
    }
    zeros.sort_by(|a, b| b.z.re.partial_cmp(&a.z.re).unwrap_or(core::cmp::Ordering::Equal));
    zeros
}
