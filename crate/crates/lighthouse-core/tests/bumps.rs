mod common;

use common::*;
use lighthouse_core::bumps::*;
use lighthouse_core::field::SpatialKernel;
use lighthouse_core::numeric::levelset::Region;
use lighthouse_core::synchrony::{find_spectrum, Classification};
use lighthouse_core::C64;
use std::f64::consts::PI;

fn hat() -> SpatialKernel {
    SpatialKernel::new(1.0, 2.0, 0.0).unwrap()
}

/// Widths with `(1/2 pi) int_0^Delta w = h`, by Simpson and bisection.
fn rate_width_oracle(h: f64) -> Vec<f64> {
    let f = |d: f64| simpson(|x| wizard(x, 1.0, 2.0, 0.0), 0.0, d, 2000) / (2.0 * PI) - h;
    scan_roots(f, 1e-6, 40.0, 400)
}

#[test]
fn rate_bump_widths() {
    let oracle = rate_width_oracle(0.01);
    assert_eq!(oracle.len(), 2);
    assert!((oracle[0] - 0.319).abs() < 1e-3 && (oracle[1] - 3.83).abs() < 1e-2, "{oracle:?}");
    let bumps = rate_bump_width(0.01, &hat()).unwrap();
    assert_eq!(bumps.len(), 2);
    for (b, o) in bumps.iter().zip(&oracle) {
        assert!((b.delta - o).abs() < 1e-9);
    }
    assert_eq!(bumps[0].branch, BumpBranch::Narrow);
    assert_eq!(bumps[1].branch, BumpBranch::Wide);
}

#[test]
fn rate_bump_spectrum_quadratic() {
    let w = hat();
    let alpha = 0.7;
    for b in rate_bump_width(0.01, &w).unwrap() {
        let sp = rate_bump_spectrum(&b, &w, alpha).unwrap();
        let c = (w.eval(0.0) + w.eval(b.delta)) / (w.eval(0.0) - w.eval(b.delta));
        for l in sp.plus {
            let u = 1.0 + l / alpha;
            assert!((u * u - c).norm() < 1e-12);
        }
        assert!(sp.minus.iter().any(|l| l.norm() < 1e-15));
        assert_eq!(sp.is_stable(), b.branch == BumpBranch::Wide);
    }
}

#[test]
fn slow_spiking_bump_matches_rate_bump() {
    let w = hat();
    let oracle = rate_width_oracle(0.01);
    for rho in [0.0, 1.0] {
        let spike = spike_bump_solve(rho, 0.01, &w, 1e-3, DEFAULT_M).unwrap();
        assert_eq!(spike.len(), 2);
        for (s, o) in spike.iter().zip(&oracle) {
            assert!((s.delta - o).abs() < 1e-3 * o, "rho {rho}: {} vs {o}", s.delta);
        }
    }
}

#[test]
fn comb_sum_closed_form_matches_series() {
    for (l, phi, alpha) in [(C64::new(0.1, 0.3), 1.0, 0.5), (C64::new(-0.2, -1.0), 5.5, 2.0), (C64::new(0.0, 0.0), 0.2, 1.0)] {
        let exact = comb_sum(l, phi, alpha);
        let series = comb_sum_truncated(l, phi, alpha, 20_000);
        assert!((exact - series).norm() < 1e-5 * exact.norm(), "{exact} vs {series}");
        // direct lattice form
        let direct: C64 = (0..400).map(|j| {
            let t = phi.rem_euclid(2.0 * PI) + 2.0 * PI * j as f64;
            (-l * t).exp() * eta(alpha, t)
        }).sum();
        assert!((exact - direct).norm() < 1e-12 * exact.norm().max(1.0));
    }
}

/// `min_t int_{-Delta/2}^{Delta/2} w(Delta/2 - y) P(t - rho |y|) dy`.
fn edge_minimum_oracle(delta: f64, rho: f64, alpha: f64) -> f64 {
    let half = delta / 2.0;
    let psi = |t: f64| {
        let f = |y: f64| wizard(half - y, 1.0, 2.0, 0.0) * lattice_drive(alpha, 2.0 * PI, (t - rho * y.abs()).rem_euclid(2.0 * PI));
        // P has a kink where t - rho |y| hits the lattice
        let mut cuts = vec![-half, 0.0, half];
        for m in -50..50 {
            let y = (t - 2.0 * PI * m as f64) / rho;
            if y > 0.0 && y < half {
                cuts.push(y);
                cuts.push(-y);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.windows(2).map(|c| simpson(f, c[0], c[1], 400)).sum::<f64>()
    };
    let n = 256;
    let h = 2.0 * PI / n as f64;
    let i0 = (0..n).min_by(|&a, &b| psi(a as f64 * h).partial_cmp(&psi(b as f64 * h)).unwrap()).unwrap();
    // golden section around the best sample
    let (mut a, mut b) = ((i0 as f64 - 1.0) * h, (i0 as f64 + 1.0) * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if psi(c) < psi(d) {
            b = d;
        } else {
            a = c;
        }
    }
    psi(0.5 * (a + b))
}

#[test]
fn spiking_bump_width_consistency() {
    let w = hat();
    let bumps = spike_bump_solve(5.0, 0.01, &w, 0.5, DEFAULT_M).unwrap();
    assert_eq!(bumps.len(), 2);
    for b in &bumps {
        let m = edge_minimum_oracle(b.delta, 5.0, 0.5);
        assert!((m - 0.01).abs() < 1e-6, "delta {}: min {m}", b.delta);
        let q = bump_drive_quadrature(b.delta / 2.0, b.t_star, b, &w);
        assert!((q - 0.01).abs() < 1e-6);
    }
    assert!((bumps[1].delta - 3.344).abs() < 1e-3 && (bumps[0].delta - 0.690).abs() < 1e-3);
}

#[test]
fn spiking_bump_branch_stability() {
    let w = hat();
    let bumps = spike_bump_solve(5.0, 0.01, &w, 0.5, DEFAULT_M).unwrap();
    let wide = bumps.iter().find(|b| b.branch == BumpBranch::Wide).unwrap();
    let narrow = bumps.iter().find(|b| b.branch == BumpBranch::Narrow).unwrap();
    let region = default_bump_region(0.5);
    let ws = spike_bump_spectrum(wide, &w, region, 200).unwrap();
    assert!(ws.is_stable(), "{:?}", ws.max_real());
    let tz = ws.minus.eigenvalues.iter().find(|p| p.class == Classification::TranslationZero).unwrap();
    assert!(tz.residual < 1e-8);
    // every reported zero really is a zero of E
    let edge = BumpEdge::new(wide, &w).unwrap();
    for p in ws.plus.eigenvalues.iter() {
        assert!(edge.e_regular(p.lambda, true).norm() < 1e-8);
    }
    let ns = spike_bump_spectrum(narrow, &w, region, 200).unwrap();
    assert!(!ns.is_stable());
    assert!(ns.plus.max_real().unwrap() > 0.0);
}

#[test]
fn slow_bump_spectrum_matches_rate_spectrum() {
    let w = hat();
    let alpha = 1e-3;
    let rate = rate_bump_width(0.01, &w).unwrap();
    for b in spike_bump_solve(0.0, 0.01, &w, alpha, DEFAULT_M).unwrap() {
        let r = rate.iter().find(|r| r.branch == b.branch).unwrap();
        let expect = rate_bump_spectrum(r, &w, alpha).unwrap();
        let edge = BumpEdge::new(&b, &w).unwrap();
        let region = Region::new(-4.0 * alpha, 2.0 * alpha, -alpha, alpha);
        let found = find_spectrum(|l| edge.e_regular(l, true), region, 200, 200);
        for l in expect.plus {
            let best = found.iter().map(|z| (z.z - l).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-3 * l.norm().max(alpha), "{:?}: {l} vs {found:?}", b.branch);
        }
    }
}

#[test]
fn degenerate_and_invalid_inputs() {
    let w = hat();
    let flat = SpatialKernel::new(-1.0, 2.0, -1.0).unwrap();
    assert!(rate_bump_width(0.01, &flat).is_err());
    assert!(spike_bump_solve(1.0, 0.01, &flat, 0.5, 10).is_err());
    assert!(spike_bump_solve(1.0, 10.0, &w, 0.5, 10).is_err());
}
