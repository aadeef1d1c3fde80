//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use nalgebra::Matrix3;
use num_traits::Float;

use crate::C64;

const B: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &Matrix3<C64>) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a 3x3 complex matrix.
pub fn expm(a: &Matrix3<C64>) -> Matrix3<C64> {
    let norm = one_norm(a);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(2f64.powi(-s), 0.0);
    let id = Matrix3::<C64>::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let c = |k: usize| C64::new(B[k], 0.0);
    let u_inner = a6 * (a6 * c(13) + a4 * c(11) + a2 * c(9)) + a6 * c(7) + a4 * c(5) + a2 * c(3) + id * c(1);
    let u = a * u_inner;
    let v = a6 * (a6 * c(12) + a4 * c(10) + a2 * c(8)) + a6 * c(6) + a4 * c(4) + a2 * c(2) + id * c(0);
    let p = v + u;
    let q = v - u;
    let mut r = q.lu().solve(&p).unwrap_or(id);
    for _ in 0..s {
        r = r * r;
    }
    r
}

/// Truncated Taylor series of `exp(a)`; a slow reference for small norms.
pub fn expm_taylor(a: &Matrix3<C64>, terms: usize) -> Matrix3<C64> {
    let mut term = Matrix3::<C64>::identity();
    let mut sum = term;
    for k in 1..terms {
        term = term * a * C64::new(1.0 / k as f64, 0.0);
        sum += term;
    }
    sum
}
