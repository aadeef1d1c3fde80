//! Direct simulation of the Lighthouse model on graphs and on a periodic 1D mesh.
//!
//! Each source carries a linear synapse `(s, u)`: `s' = -alpha s + alpha u`,
//! `u' = -alpha u`, and `u += alpha` at every spike arrival. The synapse is
//! advanced exactly over a step; the phase uses explicit Euler and firing
//! times come from linear interpolation of the `2 pi` crossing.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::f64::consts::PI;

use num_traits::Float;

use crate::field::{FieldDomain, SpatialKernel};
use crate::kernels::{Nonlinearity, SynapseKernel};
use crate::network::GraphNetwork;
use crate::numeric::fft::CircularConvolver;
use crate::numeric::{wrap, Uniform};
use crate::synchrony::solve_period;
use crate::waves::{dispersion_solve, WaveModel};
use crate::{config_err, Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Initial phases and spike history.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// `theta = 0` everywhere, past spikes at `0, -T, -2T, ...` with `T` the synchronous period.
    Synchronous,
    /// Node `i` fired at `offset_i + m period` for every such time `<= 0` (`None`: never).
    PhaseLocked { theta: Vec<f64>, period: f64, offsets: Vec<Option<f64>> },
    /// Given phases, synapses at rest.
    Quiescent { theta: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub initial: InitialState,
    /// Half-width of the uniform phase perturbation added to every node.
    pub perturbation: f64,
    pub seed: u64,
    /// `(t_switch, alpha_new)`: change the synaptic rate mid-run.
    pub alpha_switch: Option<(f64, f64)>,
    /// Times at which `(theta, s, u)` snapshots are stored.
    pub snapshot_times: Vec<f64>,
}

impl SimConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        SimConfig { dt, t_end, initial: InitialState::Synchronous, perturbation: 0.0, seed: 0, alpha_switch: None, snapshot_times: Vec::new() }
    }

    fn validate(&self, n: usize, s: &Nonlinearity) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite() && self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(config_err("dt and t_end must be positive and finite"));
        }
        if !(self.perturbation >= 0.0 && self.perturbation.is_finite()) {
            return Err(config_err("perturbation must be non-negative"));
        }
        if s.sup().is_finite() && self.dt * s.sup() >= TWO_PI {
            return Err(config_err("dt too large: more than one spike per step possible"));
        }
        if let Some((t, a)) = self.alpha_switch {
            if !(t.is_finite() && a > 0.0 && a.is_finite()) {
                return Err(config_err("alpha switch needs a finite time and positive rate"));
            }
        }
        match &self.initial {
            InitialState::Synchronous => Ok(()),
            InitialState::PhaseLocked { theta, period, offsets } => {
                if theta.len() != n || offsets.len() != n {
                    return Err(config_err("initial data length must match the node count"));
                }
                if !(*period > 0.0 && period.is_finite()) || theta.iter().any(|t| !t.is_finite()) || offsets.iter().flatten().any(|o| !o.is_finite()) {
                    return Err(config_err("initial data must be finite with a positive period"));
                }
                Ok(())
            }
            InitialState::Quiescent { theta } => {
                if theta.len() != n || theta.iter().any(|t| !t.is_finite()) {
                    return Err(config_err("initial phases must be finite and match the node count"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateSnapshot {
    pub t: f64,
    pub theta: Vec<f64>,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
}

/// Firing times per node.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikeRaster {
    pub times: Vec<Vec<f64>>,
    /// Mesh positions for field runs.
    pub positions: Option<Vec<f64>>,
    pub dt: f64,
    pub t_end: f64,
    pub snapshots: Vec<StateSnapshot>,
}

impl SpikeRaster {
    pub fn n_nodes(&self) -> usize {
        self.times.len()
    }

    pub fn total_spikes(&self) -> usize {
        self.times.iter().map(|v| v.len()).sum()
    }

    /// Strictly increasing times with gaps at least `2 pi / sup S - dt`.
    pub fn check_gaps(&self, sup_s: f64) -> bool {
        let min_gap = if sup_s.is_finite() { TWO_PI / sup_s - self.dt } else { 0.0 };
        self.times.iter().all(|v| v.windows(2).all(|p| p[1] > p[0] && p[1] - p[0] >= min_gap - 1e-12))
    }

    /// Nodes with at least one spike in `[t0, t1)`.
    pub fn active_nodes(&self, t0: f64, t1: f64) -> Vec<usize> {
        (0..self.times.len()).filter(|&i| self.times[i].iter().any(|&t| t >= t0 && t < t1)).collect()
    }

    /// Spike count per node in `[t0, t1)`.
    pub fn counts(&self, t0: f64, t1: f64) -> Vec<usize> {
        self.times.iter().map(|v| v.iter().filter(|&&t| t >= t0 && t < t1).count()).collect()
    }

    /// `max_ij |T_i^m - T_j^m|` over the spike indices shared by all nodes.
    pub fn synchrony_spread(&self) -> Vec<f64> {
        let m = self.times.iter().map(|v| v.len()).min().unwrap_or(0);
        (0..m)
            .map(|k| {
                let (lo, hi) = self.times.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[k]), hi.max(v[k])));
                hi - lo
            })
            .collect()
    }

    /// Mean inter-spike interval of node `i` over spikes in `[t0, t_end]`.
    pub fn mean_isi(&self, i: usize, t0: f64) -> Option<f64> {
        let v: Vec<f64> = self.times[i].iter().cloned().filter(|&t| t >= t0).collect();
        if v.len() < 2 {
            return None;
        }
        Some((v[v.len() - 1] - v[0]) / (v.len() - 1) as f64)
    }

    /// Phase field `theta_i(t)` reconstructed from spike counts and linear
    /// interpolation between spikes (`2 pi` per spike).
    pub fn phase_at(&self, t: f64) -> Vec<f64> {
        self.times
            .iter()
            .map(|v| {
                let k = v.partition_point(|&s| s <= t);
                let base = TWO_PI * k as f64;
                if k == 0 || k == v.len() {
                    return base;
                }
                base + TWO_PI * (t - v[k - 1]) / (v[k] - v[k - 1])
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    chan: usize,
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.time.total_cmp(&o.time) == Ordering::Equal && self.chan == o.chan
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    fn cmp(&self, o: &Self) -> Ordering {
        self.time.total_cmp(&o.time).then(self.chan.cmp(&o.chan))
    }
}

/// Synapse state `(s, u)` at time `t` from spikes at `offset + m period <= t`.
fn periodic_synapse(t: f64, offset: f64, period: f64, alpha: f64) -> (f64, f64) {
    let sig = wrap(t - offset, period);
    let q = (-alpha * period).exp();
    let e = (-alpha * sig).exp();
    let s = alpha * alpha * e * (sig / (1.0 - q) + period * q / ((1.0 - q) * (1.0 - q)));
    let u = alpha * e / (1.0 - q);
    (s, u)
}

/// Past spike times in `(lo, 0]` of a periodic history.
fn recent_spikes(offset: f64, period: f64, lo: f64) -> Vec<f64> {
    let mut t = offset - period * (offset / period).ceil();
    if t > 0.0 {
        t -= period;
    }
    let mut out = Vec::new();
    while t > lo {
        out.push(t);
        t -= period;
    }
    out
}

fn exp_step(s: &mut f64, u: &mut f64, alpha: f64, dt: f64) {
    let e = (-alpha * dt).exp();
    *s = e * (*s + alpha * dt * *u);
    *u *= e;
}

fn deliver(s: &mut f64, u: &mut f64, alpha: f64, delta: f64) {
    let e = (-alpha * delta).exp();
    *u += alpha * e;
    *s += alpha * alpha * delta * e;
}

struct Resolved {
    theta: Vec<f64>,
    /// Phase shifts applied after the firing thresholds are fixed.
    shift: Vec<f64>,
    period: f64,
    offsets: Vec<Option<f64>>,
}

fn resolve(initial: &InitialState, n: usize, sync_period: &dyn Fn() -> Result<f64>, perturbation: f64, seed: u64) -> Result<Resolved> {
    let mut r = match initial {
        InitialState::Synchronous => Resolved { theta: vec![0.0; n], shift: vec![0.0; n], period: sync_period()?, offsets: vec![Some(0.0); n] },
        InitialState::PhaseLocked { theta, period, offsets } => Resolved { theta: theta.clone(), shift: vec![0.0; n], period: *period, offsets: offsets.clone() },
        InitialState::Quiescent { theta } => Resolved { theta: theta.clone(), shift: vec![0.0; n], period: 1.0, offsets: vec![None; n] },
    };
    if perturbation > 0.0 {
        let mut rng = Uniform::new(seed);
        for t in r.shift.iter_mut() {
            *t = rng.sample(-perturbation, perturbation);
        }
    }
    Ok(r)
}

struct Phases {
    theta: Vec<f64>,
    next: Vec<f64>,
    times: Vec<Vec<f64>>,
}

impl Phases {
    fn new(theta: Vec<f64>, shift: &[f64]) -> Self {
        let next = theta.iter().map(|&t| TWO_PI * ((t / TWO_PI).floor() + 1.0)).collect();
        let theta: Vec<f64> = theta.iter().zip(shift).map(|(t, d)| t + d).collect();
        let n = theta.len();
        Phases { theta, next, times: vec![Vec::new(); n] }
    }

    /// Euler step; returns the firing time of node `i` if it crossed.
    fn step(&mut self, i: usize, rate: f64, t: f64, dt: f64) -> Option<f64> {
        let old = self.theta[i];
        let new = old + dt * rate;
        self.theta[i] = new;
        if new >= self.next[i] && old < self.next[i] {
            let tf = t + dt * (self.next[i] - old) / (new - old);
            self.next[i] += TWO_PI;
            self.times[i].push(tf);
            Some(tf)
        } else {
            None
        }
    }
}

/// Simulate a graph network.
pub fn simulate_graph(net: &GraphNetwork, kernel: SynapseKernel, s: Nonlinearity, cfg: &SimConfig) -> Result<SpikeRaster> {
    let n = net.n_nodes();
    cfg.validate(n, &s)?;
    s.validate()?;
    let sync_period = || {
        let g = net.row_sum().ok_or(config_err("synchronous start needs a constant row sum"))?;
        solve_period(&s, g, &kernel, net.delay())
    };
    let init = resolve(&cfg.initial, n, &sync_period, cfg.perturbation, cfg.seed)?;

    // One channel per (source, distinct delay).
    let mut chans: Vec<(usize, f64)> = Vec::new();
    let mut chan_of = vec![usize::MAX; n * n];
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
    for j in 0..n {
        for i in 0..n {
            if net.weight(i, j) == 0.0 {
                continue;
            }
            let d = net.pair_delay(i, j);
            let c = match by_source[j].iter().find(|&&c| chans[c].1 == d) {
                Some(&c) => c,
                None => {
                    chans.push((j, d));
                    by_source[j].push(chans.len() - 1);
                    chans.len() - 1
                }
            };
            chan_of[i * n + j] = c;
        }
    }
    let mut alpha = kernel.alpha;
    let mut ss = vec![0.0; chans.len()];
    let mut uu = vec![0.0; chans.len()];
    let mut queue: BinaryHeap<Reverse<Event>> = BinaryHeap::new();
    for (c, &(j, d)) in chans.iter().enumerate() {
        if let Some(off) = init.offsets[j] {
            let (s0, u0) = periodic_synapse(0.0, off + d, init.period, alpha);
            ss[c] = s0;
            uu[c] = u0;
            if d > 0.0 {
                // Spikes in (-d, 0] are still in flight.
                for p in recent_spikes(off, init.period, -d) {
                    queue.push(Reverse(Event { time: p + d, chan: c }));
                }
            }
        }
    }
    let mut ph = Phases::new(init.theta, &init.shift);
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let dt = cfg.dt;
    let mut psi = vec![0.0; n];
    let mut snaps = Vec::new();
    let mut snap_times = cfg.snapshot_times.clone();
    snap_times.sort_by(f64::total_cmp);
    let mut next_snap = 0;
    for step in 0..steps {
        let t = step as f64 * dt;
        while next_snap < snap_times.len() && snap_times[next_snap] <= t + 0.5 * dt {
            let first: Vec<usize> = (0..n).map(|j| by_source[j].first().cloned().unwrap_or(usize::MAX)).collect();
            snaps.push(StateSnapshot {
                t,
                theta: ph.theta.clone(),
                s: first.iter().map(|&c| if c == usize::MAX { 0.0 } else { ss[c] }).collect(),
                u: first.iter().map(|&c| if c == usize::MAX { 0.0 } else { uu[c] }).collect(),
            });
            next_snap += 1;
        }
        if let Some((ts, a)) = cfg.alpha_switch {
            if t >= ts {
                alpha = a;
            }
        }
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                let c = chan_of[i * n + j];
                if c != usize::MAX {
                    acc += net.weight(i, j) * ss[c];
                }
            }
            psi[i] = acc;
        }
        for i in 0..n {
            if let Some(tf) = ph.step(i, s.eval(psi[i]), t, dt) {
                for &c in &by_source[i] {
                    queue.push(Reverse(Event { time: tf + chans[c].1, chan: c }));
                }
            }
        }
        for c in 0..chans.len() {
            exp_step(&mut ss[c], &mut uu[c], alpha, dt);
        }
        let t1 = t + dt;
        while let Some(Reverse(ev)) = queue.peek().cloned() {
            if ev.time > t1 {
                break;
            }
            queue.pop();
            deliver(&mut ss[ev.chan], &mut uu[ev.chan], alpha, (t1 - ev.time).max(0.0));
        }
    }
    Ok(SpikeRaster { times: ph.times, positions: None, dt, t_end: steps as f64 * dt, snapshots: snaps })
}

/// Simulate the field on a periodic mesh; `inv_v = 0` is instantaneous transmission.
pub fn simulate_field(
    domain: FieldDomain,
    kernel: SynapseKernel,
    s: Nonlinearity,
    w: &SpatialKernel,
    inv_v: f64,
    cfg: &SimConfig,
) -> Result<SpikeRaster> {
    let n = domain.n_mesh;
    cfg.validate(n, &s)?;
    s.validate()?;
    if !(inv_v >= 0.0 && inv_v.is_finite()) {
        return Err(config_err("1/v must be finite and non-negative"));
    }
    let sync_period = || {
        let model = WaveModel::new(kernel, *w, s, inv_v)?;
        Ok(dispersion_solve(0.0, &model)?[0])
    };
    let init = resolve(&cfg.initial, n, &sync_period, cfg.perturbation, cfg.seed)?;
    let weights = domain.kernel_weights(w);
    let dt = cfg.dt;
    let mut alpha = kernel.alpha;

    // Lags kept for the delayed sum; the rest are negligible.
    let wmax = weights.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let lags: Vec<(usize, f64, f64)> = (0..=n / 2)
        .filter(|&l| weights[l].abs() > 1e-13 * wmax)
        .map(|l| (l, weights[l], domain.lag_distance(l) * inv_v))
        .collect();
    let max_delay = lags.iter().fold(0.0f64, |m, l| m.max(l.2));
    if inv_v > 0.0 && cfg.t_end <= max_delay {
        return Err(Error::Buffer("t_end shorter than the longest axonal delay"));
    }
    let hist_len = if inv_v > 0.0 { (max_delay / dt).ceil() as usize + 3 } else { 1 };

    let mut ss = vec![0.0; n];
    let mut uu = vec![0.0; n];
    for j in 0..n {
        if let Some(off) = init.offsets[j] {
            let (a, b) = periodic_synapse(0.0, off, init.period, alpha);
            ss[j] = a;
            uu[j] = b;
        }
    }
    // Ring of past s; slot for step k is k mod hist_len (k may be negative).
    let mut hist = vec![vec![0.0; n]; hist_len];
    if inv_v > 0.0 {
        for back in 0..hist_len {
            let t = -(back as f64) * dt;
            let slot = (hist_len - back % hist_len) % hist_len;
            for j in 0..n {
                if let Some(off) = init.offsets[j] {
                    hist[slot][j] = periodic_synapse(t, off, init.period, alpha).0;
                }
            }
        }
    }
    let mut conv = if inv_v == 0.0 {
        if !n.is_power_of_two() {
            return Err(config_err("instantaneous field simulation needs a power-of-two mesh"));
        }
        Some(CircularConvolver::new(&weights))
    } else {
        None
    };
    let mut ph = Phases::new(init.theta, &init.shift);
    let steps = (cfg.t_end / dt).round() as usize;
    let mut psi = vec![0.0; n];
    let mut fired: Vec<(usize, f64)> = Vec::new();
    let mut snaps = Vec::new();
    let mut snap_times = cfg.snapshot_times.clone();
    snap_times.sort_by(f64::total_cmp);
    let mut next_snap = 0;
    for step in 0..steps {
        let t = step as f64 * dt;
        while next_snap < snap_times.len() && snap_times[next_snap] <= t + 0.5 * dt {
            snaps.push(StateSnapshot { t, theta: ph.theta.clone(), s: ss.clone(), u: uu.clone() });
            next_snap += 1;
        }
        if let Some((ts, a)) = cfg.alpha_switch {
            if t >= ts {
                alpha = a;
            }
        }
        match conv.as_mut() {
            Some(c) => c.apply(&ss, &mut psi),
            None => {
                hist[step % hist_len].copy_from_slice(&ss);
                psi.iter_mut().for_each(|p| *p = 0.0);
                for &(l, c, d) in &lags {
                    let back = d / dt;
                    let k = back.floor();
                    let f = back - k;
                    let k = k as usize;
                    let a = &hist[(step + hist_len * (k / hist_len + 1) - k) % hist_len];
                    let b = &hist[(step + hist_len * ((k + 1) / hist_len + 1) - k - 1) % hist_len];
                    let read = |j: usize| (1.0 - f) * a[j] + f * b[j];
                    for (i, p) in psi.iter_mut().enumerate() {
                        *p += if l == 0 {
                            c * read(i)
                        } else if 2 * l == n {
                            c * read((i + l) % n)
                        } else {
                            c * (read((i + l) % n) + read((i + n - l) % n))
                        };
                    }
                }
            }
        }
        fired.clear();
        for i in 0..n {
            if let Some(tf) = ph.step(i, s.eval(psi[i]), t, dt) {
                fired.push((i, tf));
            }
        }
        for j in 0..n {
            exp_step(&mut ss[j], &mut uu[j], alpha, dt);
        }
        for &(j, tf) in &fired {
            deliver(&mut ss[j], &mut uu[j], alpha, t + dt - tf);
        }
    }
    let positions = (0..n).map(|i| domain.x(i)).collect();
    Ok(SpikeRaster { times: ph.times, positions: Some(positions), dt, t_end: steps as f64 * dt, snapshots: snaps })
}

/// Phases and spike offsets of the bump `theta = t - rho |x|` on `|x| <= Delta/2`,
/// `theta = 0` elsewhere.
pub fn bump_initial_state(domain: &FieldDomain, delta: f64, rho: f64) -> InitialState {
    let n = domain.n_mesh;
    let mut theta = vec![0.0; n];
    let mut offsets = vec![None; n];
    for i in 0..n {
        let x = domain.x(i).abs();
        if x <= delta / 2.0 {
            theta[i] = -rho * x;
            offsets[i] = Some(rho * x);
        }
    }
    InitialState::PhaseLocked { theta, period: TWO_PI, offsets }
}

/// Travelling-wave start: firing times `m T + rho x`.
pub fn wave_initial_state(domain: &FieldDomain, period: f64, rho: f64) -> InitialState {
    let n = domain.n_mesh;
    let mut theta = vec![0.0; n];
    let mut offsets = vec![None; n];
    for i in 0..n {
        let off = rho * (domain.x(i) + domain.half_length);
        theta[i] = -TWO_PI * wrap(off, period) / period;
        offsets[i] = Some(off);
    }
    InitialState::PhaseLocked { theta, period, offsets }
}

/// Parameters of the wandering-bump protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct WanderConfig {
    pub w: SpatialKernel,
    pub s: Nonlinearity,
    /// Threshold used to build the initial bump.
    pub h: f64,
    pub rho: f64,
    pub n_mesh: usize,
    /// Half-length `L` of the domain.
    pub half_length: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub switch: bool,
    pub dt: f64,
    pub t_end: f64,
    pub harmonics: usize,
}

/// Outcome of the wandering protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct WanderResult {
    pub raster: SpikeRaster,
    pub delta: f64,
    pub t_switch: f64,
}

/// Seed the wide spiking bump at `alpha0`, run, and switch to `alpha1` after a fifth of the horizon.
pub fn run_wandering_protocol(cfg: &WanderConfig) -> Result<WanderResult> {
    let domain = FieldDomain::new(cfg.n_mesh, cfg.half_length)?;
    let bumps = crate::bumps::spike_bump_solve(cfg.rho, cfg.h, &cfg.w, cfg.alpha0, cfg.harmonics)?;
    let bump = bumps
        .iter()
        .filter(|b| b.branch == crate::bumps::BumpBranch::Wide)
        .fold(None, |acc: Option<crate::bumps::SpikeBump>, b| match acc {
            Some(a) if a.delta >= b.delta => Some(a),
            _ => Some(*b),
        })
        .ok_or(Error::NoSolution("no wide bump to seed"))?;
    let t_switch = cfg.t_end / 5.0;
    let mut sim = SimConfig::new(cfg.dt, cfg.t_end);
    sim.initial = bump_initial_state(&domain, bump.delta, bump.rho);
    if cfg.switch {
        sim.alpha_switch = Some((t_switch, cfg.alpha1));
    }
    let raster = simulate_field(domain, SynapseKernel::new(cfg.alpha0)?, cfg.s, &cfg.w, 0.0, &sim)?;
    Ok(WanderResult { raster, delta: bump.delta, t_switch })
}
