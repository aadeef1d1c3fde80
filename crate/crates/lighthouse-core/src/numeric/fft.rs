//! Radix-2 FFT and circular convolution on power-of-two meshes.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

use crate::C64;

/// In-place forward (`inverse = false`) or unnormalised inverse transform.
///
/// Panics if the length is not a power of two.
pub fn fft_in_place(data: &mut [C64], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let wl = C64::new(ang.cos(), ang.sin());
        for start in (0..n).step_by(len) {
            let mut w = C64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
                w *= wl;
            }
        }
        len <<= 1;
    }
}

/// Circular convolution with a fixed real kernel, reusing its transform.
#[derive(Clone, Debug)]
pub struct CircularConvolver {
    kernel_hat: Vec<C64>,
    scratch: Vec<C64>,
}

impl CircularConvolver {
    /// `kernel[j]` is the weight at circular offset `j`; it already includes the mesh spacing.
    pub fn new(kernel: &[f64]) -> Self {
        let mut kernel_hat: Vec<C64> = kernel.iter().map(|&v| C64::new(v, 0.0)).collect();
        fft_in_place(&mut kernel_hat, false);
        CircularConvolver { scratch: alloc::vec![C64::new(0.0, 0.0); kernel.len()], kernel_hat }
    }

    /// `out[i] = sum_j kernel[(i - j) mod n] * input[j]`.
    pub fn apply(&mut self, input: &[f64], out: &mut [f64]) {
        let n = self.kernel_hat.len();
        for (s, &v) in self.scratch.iter_mut().zip(input) {
            *s = C64::new(v, 0.0);
        }
        fft_in_place(&mut self.scratch, false);
        for (s, k) in self.scratch.iter_mut().zip(&self.kernel_hat) {
            *s *= *k;
        }
        fft_in_place(&mut self.scratch, true);
        let scale = 1.0 / n as f64;
        for (o, s) in out.iter_mut().zip(&self.scratch) {
            *o = s.re * scale;
        }
    }
}

/// Power spectrum `|X_m|^2` of a real sequence for `m = 0..n/2`.
pub fn power_spectrum(x: &[f64]) -> Vec<f64> {
    let mut buf: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    buf[..=x.len() / 2].iter().map(|c| c.norm_sqr()).collect()
}
