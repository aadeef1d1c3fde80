//! Scalar and small-system root finders.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoRoot("bracket does not change sign"));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Sample `f` on `n` equal steps of `[a, b]` and return every sign-changing sub-interval.
pub fn sign_changes<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + i as f64 * h };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 == 0.0 || f0.signum() != f1.signum()) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// All roots of `f` on `[a, b]` found by scanning `n` cells and polishing with Brent.
pub fn all_roots<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, tol: f64) -> Vec<f64> {
    let brackets = sign_changes(&mut f, a, b, n);
    let mut roots: Vec<f64> = Vec::new();
    for (lo, hi) in brackets {
        if let Ok(r) = brent(&mut f, lo, hi, tol) {
            if roots.last().is_none_or(|&p| (r - p).abs() > 10.0 * tol) {
                roots.push(r);
            }
        }
    }
    roots
}

/// Newton's method for two equations in two unknowns with a finite-difference Jacobian.
pub fn newton2<F: FnMut(f64, f64) -> (f64, f64)>(
    mut f: F,
    x0: (f64, f64),
    tol: f64,
    max_iter: usize,
) -> Option<(f64, f64)> {
    let (mut x, mut y) = x0;
    for _ in 0..max_iter {
        let (f1, f2) = f(x, y);
        if !(f1.is_finite() && f2.is_finite()) {
            return None;
        }
        if f1.abs().max(f2.abs()) < tol {
            return Some((x, y));
        }
        let hx = 1e-7 * x.abs().max(1e-3);
        let hy = 1e-7 * y.abs().max(1e-3);
        let (a1, a2) = f(x + hx, y);
        let (b1, b2) = f(x - hx, y);
        let (c1, c2) = f(x, y + hy);
        let (d1, d2) = f(x, y - hy);
        let j11 = (a1 - b1) / (2.0 * hx);
        let j21 = (a2 - b2) / (2.0 * hx);
        let j12 = (c1 - d1) / (2.0 * hy);
        let j22 = (c2 - d2) / (2.0 * hy);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (j22 * f1 - j12 * f2) / det;
        let dy = (-j21 * f1 + j11 * f2) / det;
        x -= dx;
        y -= dy;
    }
    let (f1, f2) = f(x, y);
    if f1.abs().max(f2.abs()) < tol {
        Some((x, y))
    } else {
        None
    }
}

/// Newton's method for `f: R^n -> R^n` with a central-difference Jacobian.
pub fn newton_n<F: FnMut(&[f64]) -> Vec<f64>>(mut f: F, x0: &[f64], tol: f64, max_iter: usize) -> Option<Vec<f64>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    for _ in 0..max_iter {
        let fx = f(&x);
        if fx.len() != n || fx.iter().any(|v| !v.is_finite()) {
            return None;
        }
        if fx.iter().all(|v| v.abs() < tol) {
            return Some(x);
        }
        let mut jac = nalgebra::DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1e-3);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = nalgebra::DVector::from_vec(fx);
        let dx = jac.lu().solve(&rhs)?;
        for j in 0..n {
            x[j] -= dx[j];
        }
    }
    let fx = f(&x);
    if fx.iter().all(|v| v.is_finite() && v.abs() < tol) {
        Some(x)
    } else {
        None
    }
}
