//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use lighthouse_core::C64;

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

pub fn simpson_c<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let re = simpson(|x| f(x).re, a, b, n);
    let im = simpson(|x| f(x).im, a, b, n);
    C64::new(re, im)
}

/// Alpha function written out directly.
pub fn eta(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        alpha * alpha * t * (-alpha * t).exp()
    }
}

/// `sum_{p >= 0} eta(t + p T)` for `t` in `[0, T)`, summed until negligible.
pub fn lattice_drive(alpha: f64, period: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    let mut p = 0;
    loop {
        let term = eta(alpha, t + p as f64 * period);
        acc += term;
        if p > 5 && term < 1e-300 || p > 200_000 {
            break;
        }
        p += 1;
    }
    acc
}

/// Wizard hat `A e^{-|x|} / 2 - (A - Gamma) e^{-|x|/sigma} / (2 sigma)`.
pub fn wizard(x: f64, amp: f64, sigma: f64, total: f64) -> f64 {
    let x = x.abs();
    amp * (-x).exp() / 2.0 - (amp - total) * (-x / sigma).exp() / (2.0 * sigma)
}

/// Bisection root on a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign-change roots of `f` on a uniform scan.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (b - a) / n as f64;
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=n {
        let x1 = a + i as f64 * h;
        let f1 = f(x1);
        if f0.signum() != f1.signum() {
            out.push(bisect(&f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
