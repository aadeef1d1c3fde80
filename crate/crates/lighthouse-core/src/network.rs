//! Weight matrices on graphs and their eigen-structure.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::{config_err, Error, Result, C64};

/// Tolerance for detecting a constant row sum.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Eigenvector matrices worse conditioned than this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Dense weighted graph with a common (or per-pair) delay.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphNetwork {
    n: usize,
    weights: Vec<f64>,
    delay: f64,
    pair_delays: Option<Vec<f64>>,
    row_sum: Option<f64>,
    generator: Option<Vec<f64>>,
}

fn detect_row_sum(n: usize, w: &[f64]) -> Option<f64> {
    let sums: Vec<f64> = (0..n).map(|i| w[i * n..(i + 1) * n].iter().sum()).collect();
    let g = sums[0];
    if sums.iter().all(|s| (s - g).abs() < ROW_SUM_TOL) {
        Some(g)
    } else {
        None
    }
}

impl GraphNetwork {
    /// Build from a row-major `n x n` weight matrix.
    pub fn from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n < 1 || weights.len() != n * n {
            return Err(config_err("weight matrix must be square and non-empty"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(config_err("weights must be finite"));
        }
        let row_sum = detect_row_sum(n, &weights);
        Ok(GraphNetwork { n, weights, delay: 0.0, pair_delays: None, row_sum, generator: None })
    }

    /// Set a single common delay.
    pub fn with_delay(mut self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(config_err("delay must be non-negative"));
        }
        self.delay = tau;
        Ok(self)
    }

    /// Per-pair delays `tau_ij` (row-major). Only the simulator honours these.
    pub fn with_pair_delays(mut self, delays: Vec<f64>) -> Result<Self> {
        if delays.len() != self.n * self.n || delays.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(config_err("pair delays must be a non-negative n x n matrix"));
        }
        self.pair_delays = Some(delays);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Delay from node `j` to node `i`.
    pub fn pair_delay(&self, i: usize, j: usize) -> f64 {
        match &self.pair_delays {
            Some(d) => d[i * self.n + j],
            None => self.delay,
        }
    }

    pub fn has_pair_delays(&self) -> bool {
        self.pair_delays.is_some()
    }

    /// The common row sum `Gamma`, when every row sums to the same value.
    pub fn row_sum(&self) -> Option<f64> {
        self.row_sum
    }

    /// Circulant generator when built by [`build_circulant`].
    pub fn generator(&self) -> Option<&[f64]> {
        self.generator.as_deref()
    }
}

/// Global coupling `w_ij = (Gamma + 1) delta_ij - 1/N`.
pub fn build_global(n: usize, gamma: f64) -> Result<GraphNetwork> {
    if n < 2 {
        return Err(config_err("global network needs N >= 2"));
    }
    let mut w = vec![-1.0 / n as f64; n * n];
    for i in 0..n {
        w[i * n + i] += gamma + 1.0;
    }
    let mut net = GraphNetwork::from_weights(n, w)?;
    net.row_sum = Some(gamma);
    Ok(net)
}

/// Circulant matrix whose rows are cyclic shifts of `c`: `w_ij = c[(j - i) mod N]`.
pub fn build_circulant(c: &[f64]) -> Result<GraphNetwork> {
    let n = c.len();
    if n < 2 {
        return Err(config_err("circulant generator needs length >= 2"));
    }
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = c[(j + n - i) % n];
        }
    }
    let mut net = GraphNetwork::from_weights(n, w)?;
    net.row_sum = Some(c.iter().sum());
    net.generator = Some(c.to_vec());
    Ok(net)
}

/// Alternating generator `(0, -eps, eps, ..., -eps, eps)`.
pub fn alternating_generator(n: usize, eps: f64) -> Vec<f64> {
    (0..n).map(|j| if j == 0 { 0.0 } else if j % 2 == 1 { -eps } else { eps }).collect()
}

/// Graph Laplacian `w_ij = -a_ij + delta_ij sum_k a_ik` of a non-negative adjacency.
pub fn build_laplacian(n: usize, a: &[f64]) -> Result<GraphNetwork> {
    if a.len() != n * n || n == 0 {
        return Err(config_err("adjacency must be square"));
    }
    if a.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(config_err("adjacency must be non-negative"));
    }
    let mut w: Vec<f64> = a.iter().map(|v| -v).collect();
    for i in 0..n {
        let s: f64 = a[i * n..(i + 1) * n].iter().sum();
        w[i * n + i] += s;
    }
    let mut net = GraphNetwork::from_weights(n, w)?;
    net.row_sum = Some(0.0);
    Ok(net)
}

/// Circulant eigenvalues `chi_l = sum_j c_j exp(2 pi i l j / N)`.
pub fn circulant_eigenvalues(c: &[f64]) -> Vec<C64> {
    let n = c.len();
    (0..n)
        .map(|l| {
            c.iter()
                .enumerate()
                .map(|(j, &cj)| C64::from_polar(cj, 2.0 * PI * (l * j % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

/// Eigenvalues `w_mu` with unit eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Vec<Vec<C64>>,
    pub condition: f64,
}

impl EigenDecomposition {
    /// Index of the mode whose eigenvector is closest to `(1, ..., 1)`.
    pub fn uniform_mode(&self) -> usize {
        let mut best = 0;
        let mut best_score = -1.0;
        for (k, v) in self.eigenvectors.iter().enumerate() {
            let n = v.len() as f64;
            let s: C64 = v.iter().sum();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let score = s.norm() / (norm * n.sqrt());
            if score > best_score {
                best_score = score;
                best = k;
            }
        }
        best
    }

    /// Eigenvalues other than the synchronous (uniform) mode.
    pub fn transverse(&self) -> Vec<C64> {
        let skip = self.uniform_mode();
        self.eigenvalues.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| *v).collect()
    }
}

fn sort_desc(pairs: &mut [(C64, Vec<C64>)]) {
    pairs.sort_by(|a, b| {
        b.0.re
            .partial_cmp(&a.0.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(b.0.im.partial_cmp(&a.0.im).unwrap_or(core::cmp::Ordering::Equal))
    });
}

fn condition_number(vectors: &[Vec<C64>]) -> f64 {
    let n = vectors.len();
    if n == 0 || vectors.iter().any(|v| v.len() != n) {
        return f64::INFINITY;
    }
    let m = DMatrix::<C64>::from_fn(n, n, |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Full complex spectrum sorted by real part (descending).
///
/// Circulant networks use the closed form. Otherwise eigenvalues come from
/// a real Schur form and each eigenvalue cluster takes its eigenvectors
/// from the null space of `w - lambda I`; a defective cluster shows up as
/// a singular eigenvector matrix.
pub fn eigen(net: &GraphNetwork) -> Result<EigenDecomposition> {
    let n = net.n;
    let mut pairs: Vec<(C64, Vec<C64>)> = if let Some(c) = &net.generator {
        let chi = circulant_eigenvalues(c);
        let scale = 1.0 / (n as f64).sqrt();
        chi.into_iter()
            .enumerate()
            .map(|(l, x)| {
                let v = (0..n).map(|j| C64::from_polar(scale, 2.0 * PI * (l * j % n) as f64 / n as f64)).collect();
                (x, v)
            })
            .collect()
    } else {
        schur_eigen(n, &net.weights)
    };
    sort_desc(&mut pairs);
    let (eigenvalues, eigenvectors): (Vec<C64>, Vec<Vec<C64>>) = pairs.into_iter().unzip();
    let condition = condition_number(&eigenvectors);
    if !(condition < MAX_CONDITION) {
        return Err(Error::NonDiagonalisable { condition });
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors, condition })
}

fn schur_eigen(n: usize, w: &[f64]) -> Vec<(C64, Vec<C64>)> {
    let a = DMatrix::<f64>::from_row_slice(n, n, w);
    let scale = a.iter().map(|z| z.abs()).fold(0.0, f64::max).max(1e-300);
    let Some(schur) = [1e-15, 1e-13, 1e-11].iter().find_map(|&eps| nalgebra::Schur::try_new(a.clone(), eps, 100_000)) else {
        return Vec::new();
    };
    let mut values: Vec<C64> = schur.complex_eigenvalues().iter().cloned().collect();
    values.sort_by(|x, y| y.re.partial_cmp(&x.re).unwrap_or(core::cmp::Ordering::Equal).then(y.im.partial_cmp(&x.im).unwrap_or(core::cmp::Ordering::Equal)));
    let cluster_tol = 1e-7 * scale;
    let mut out: Vec<(C64, Vec<C64>)> = Vec::with_capacity(n);
    let mut k = 0;
    while k < values.len() {
        let mut end = k + 1;
        while end < values.len() && (values[end] - values[k]).norm() < cluster_tol {
            end += 1;
        }
        let mult = end - k;
        let lam: C64 = values[k..end].iter().sum::<C64>() / mult as f64;
        let shifted = DMatrix::<C64>::from_fn(n, n, |i, j| C64::new(w[i * n + j], 0.0) - if i == j { lam } else { C64::new(0.0, 0.0) });
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("right singular vectors requested");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&x, &y| svd.singular_values[x].partial_cmp(&svd.singular_values[y]).unwrap_or(core::cmp::Ordering::Equal));
        let null_tol = 1e-6 * scale * n as f64;
        for (r, &row) in idx.iter().take(mult).enumerate() {
            // A singular value well above zero means the cluster is defective;
            // repeating the first null vector makes the eigenvector matrix singular.
            let row = if svd.singular_values[row] > null_tol { idx[0] } else { row };
            let v: Vec<C64> = (0..n).map(|c| vt[(row, c)].conj()).collect();
            out.push((values[k + r], v));
        }
        k = end;
    }
    out
}

/// Residual `||w v - lambda v|| / ||v||` of an eigenpair.
pub fn eigen_residual(net: &GraphNetwork, lambda: C64, v: &[C64]) -> f64 {
    let n = net.n;
    let mut r = 0.0;
    for i in 0..n {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..n {
            s += v[j] * net.weights[i * n + j];
        }
        r += (s - lambda * v[i]).norm_sqr();
    }
    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    (r / nv).sqrt()
}
