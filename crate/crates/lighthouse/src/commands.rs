//! One function per subcommand. Each writes its CSV tables and returns a
//! short human summary.

use std::f64::consts::PI;
use std::path::Path;

use lighthouse_core::bumps::{
    default_bump_region, rate_bump_spectrum, rate_bump_width, spike_bump_solve,
    spike_bump_spectrum, BumpBranch, BumpEdge, SpikeBump, DEFAULT_M,
};
use lighthouse_core::kernels::{Nonlinearity, SynapseKernel};
use lighthouse_core::msf::{msf_grid, msf_reduced, MsfContext};
use lighthouse_core::network::eigen;
use lighthouse_core::numeric::levelset::Region;
use lighthouse_core::simulator::{
    bump_initial_state, run_wandering_protocol, simulate_field, simulate_graph, wave_initial_state,
    InitialState, SimConfig, SpikeRaster, WanderConfig,
};
use lighthouse_core::synchrony::{network_spectrum, solve_period, LinearSync, DEFAULT_REGION};
use lighthouse_core::turing::{critical_curve, spectrum, TuringContext};
use lighthouse_core::waves::{dispersion_solve, WaveModel};
use lighthouse_core::C64;
use rayon::prelude::*;

use crate::config::{InitKind, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Outputs, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    SimGraph,
    SimField,
    Period,
    Spectrum,
    Msf,
    Dispersion,
    Turing,
    Bump,
    BumpSpectrum,
    RateBump,
    Wander,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SimGraph => "sim-graph",
            Command::SimField => "sim-field",
            Command::Period => "period",
            Command::Spectrum => "spectrum",
            Command::Msf => "msf",
            Command::Dispersion => "dispersion",
            Command::Turing => "turing",
            Command::Bump => "bump",
            Command::BumpSpectrum => "bump-spectrum",
            Command::RateBump => "rate-bump",
            Command::Wander => "wander",
        }
    }
}

/// Run `cmd`; `base` resolves relative paths inside the config.
pub fn run(
    cmd: Command,
    cfg: &RunConfig,
    base: &Path,
    out: &mut Outputs,
) -> Result<Vec<String>, CliError> {
    match cmd {
        Command::SimGraph => sim_graph(cfg, base, out),
        Command::SimField => sim_field(cfg, out),
        Command::Period => period(cfg, base, out),
        Command::Spectrum => graph_spectrum(cfg, base, out),
        Command::Msf => msf(cfg, base, out),
        Command::Dispersion => dispersion(cfg, out),
        Command::Turing => turing(cfg, out),
        Command::Bump => bump(cfg, out),
        Command::BumpSpectrum => bump_spectrum(cfg, out),
        Command::RateBump => rate_bump(cfg, out),
        Command::Wander => wander(cfg, out),
    }
}

fn sim_config(cfg: &RunConfig) -> Result<SimConfig, CliError> {
    let s = cfg.sim_section()?;
    let mut sc = SimConfig::new(s.dt, s.t_end);
    sc.perturbation = s.perturbation;
    sc.seed = cfg.seed;
    sc.snapshot_times = s.snapshot_times.clone();
    Ok(sc)
}

fn raster_table(r: &SpikeRaster, label: &'static str) -> Table {
    let mut t = Table::new(&[label, "firing_time[t]"]);
    for (i, times) in r.times.iter().enumerate() {
        let key: Cell = match &r.positions {
            Some(p) => p[i].into(),
            None => i.into(),
        };
        for &tf in times {
            t.push(vec![key.clone(), tf.into()]);
        }
    }
    t
}

fn snapshot_table(r: &SpikeRaster, label: &'static str) -> Table {
    let mut t = Table::new(&["t[t]", label, "theta[rad]", "s", "u"]);
    for snap in &r.snapshots {
        for i in 0..snap.theta.len() {
            let key: Cell = match &r.positions {
                Some(p) => p[i].into(),
                None => i.into(),
            };
            t.push(vec![
                snap.t.into(),
                key,
                snap.theta[i].into(),
                snap.s[i].into(),
                snap.u[i].into(),
            ]);
        }
    }
    t
}

fn raster_summary(r: &SpikeRaster) -> Vec<String> {
    let silent = r.times.iter().filter(|v| v.is_empty()).count();
    let last = r.t_end - r.t_end / 10.0;
    let dead = r.counts(last, r.t_end).iter().filter(|&&c| c == 0).count();
    vec![
        format!(
            "nodes {}  spikes {}  never fired {}",
            r.n_nodes(),
            r.total_spikes(),
            silent
        ),
        format!("silent over the last tenth of the run: {dead}"),
    ]
}

fn sim_graph(cfg: &RunConfig, base: &Path, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let net = cfg.network(base)?;
    let mut sc = sim_config(cfg)?;
    sc.initial = match cfg.sim_section()?.init {
        InitKind::Synchronous => InitialState::Synchronous,
        InitKind::Quiescent => InitialState::Quiescent {
            theta: vec![0.0; net.n_nodes()],
        },
        k => {
            return Err(CliError::Config(format!(
                "sim.init: {k:?} needs a field, not a graph"
            )))
        }
    };
    let r = simulate_graph(&net, cfg.synapse()?, cfg.nonlinearity(), &sc)?;
    out.table("raster.csv", &raster_table(&r, "node"))?;
    if !r.snapshots.is_empty() {
        out.table("snapshots.csv", &snapshot_table(&r, "node"))?;
    }
    Ok(raster_summary(&r))
}

fn bump_h(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.nonlinearity() {
        Nonlinearity::Heaviside { h } | Nonlinearity::SmoothExp { h, .. } => Ok(h),
        Nonlinearity::Linear { .. } => Err(CliError::Config(
            "model.nonlinearity: bumps need a threshold nonlinearity".into(),
        )),
    }
}

fn harmonics(cfg: &RunConfig) -> usize {
    cfg.analysis.harmonics.unwrap_or(DEFAULT_M)
}

fn widest(bumps: &[SpikeBump], branch: BumpBranch) -> Option<SpikeBump> {
    bumps
        .iter()
        .filter(|b| b.branch == branch)
        .cloned()
        .fold(None, |acc: Option<SpikeBump>, b| match acc {
            Some(a) if a.delta >= b.delta => Some(a),
            _ => Some(b),
        })
}

fn sim_field(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let domain = cfg.domain()?;
    let w = cfg.spatial_kernel()?;
    let kernel = cfg.synapse()?;
    let s = cfg.nonlinearity();
    let mut sc = sim_config(cfg)?;
    let mut notes = Vec::new();
    sc.initial = match cfg.sim_section()?.init {
        InitKind::Synchronous => InitialState::Synchronous,
        InitKind::Quiescent => InitialState::Quiescent {
            theta: vec![0.0; domain.n_mesh],
        },
        InitKind::Bump => {
            let rho = cfg.rho()?;
            let bumps = spike_bump_solve(rho, bump_h(cfg)?, &w, cfg.model.alpha, harmonics(cfg))?;
            let b = widest(&bumps, BumpBranch::Wide)
                .ok_or(lighthouse_core::Error::NoSolution("no wide bump"))?;
            notes.push(format!("seeded bump width {:.6}", b.delta));
            bump_initial_state(&domain, b.delta, rho)
        }
        InitKind::Wave => {
            let rho = cfg.rho()?;
            let model = WaveModel::new(kernel, w, s, cfg.model.inv_v)?;
            let period = dispersion_solve(rho, &model)?[0];
            notes.push(format!("seeded wave rho {rho} period {period:.9}"));
            wave_initial_state(&domain, period, rho)
        }
    };
    let r = simulate_field(domain, kernel, s, &w, cfg.model.inv_v, &sc)?;
    out.table("raster.csv", &raster_table(&r, "position[x]"))?;
    if !r.snapshots.is_empty() {
        out.table("snapshots.csv", &snapshot_table(&r, "position[x]"))?;
    }
    notes.extend(raster_summary(&r));
    Ok(notes)
}

fn period(cfg: &RunConfig, base: &Path, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let alphas = cfg
        .analysis
        .alphas
        .map(|s| s.values())
        .unwrap_or_else(|| vec![cfg.model.alpha]);
    let row_sums = if cfg.analysis.row_sums.is_empty() {
        let net = cfg.network(base)?;
        vec![net.row_sum().ok_or_else(|| {
            CliError::Config(
                "analysis.row_sums: required when the network has no fixed row sum".into(),
            )
        })?]
    } else {
        cfg.analysis.row_sums.clone()
    };
    let s = cfg.nonlinearity();
    let tau = cfg.model.tau;
    let jobs: Vec<(f64, f64)> = row_sums
        .iter()
        .flat_map(|&g| alphas.iter().map(move |&a| (g, a)))
        .collect();
    let periods: Vec<Result<f64, CliError>> = jobs
        .par_iter()
        .map(
            |&(g, a)| match solve_period(&s, g, &SynapseKernel::new(a)?, tau) {
                Ok(t) => Ok(t),
                Err(lighthouse_core::Error::Config(m)) => Err(CliError::Config(m)),
                Err(_) => Ok(f64::NAN),
            },
        )
        .collect();
    let mut t = Table::new(&["alpha[1/t]", "Gamma", "Omega[rad/t]", "T[t]"]);
    let mut missing = 0;
    for (&(g, a), p) in jobs.iter().zip(periods) {
        let p = p?;
        if p.is_nan() {
            missing += 1;
        }
        t.push(vec![a.into(), g.into(), (2.0 * PI / p).into(), p.into()]);
    }
    out.table("period.csv", &t)?;
    Ok(vec![format!(
        "{} points, {} without a periodic solution",
        jobs.len(),
        missing
    )])
}

fn linear_sync(cfg: &RunConfig, row_sum: f64) -> Result<LinearSync, CliError> {
    let (gamma, theta) = cfg.linear("spectrum")?;
    Ok(LinearSync::new(
        gamma,
        theta,
        row_sum,
        cfg.model.alpha,
        cfg.model.tau,
    )?)
}

fn graph_spectrum(
    cfg: &RunConfig,
    base: &Path,
    out: &mut Outputs,
) -> Result<Vec<String>, CliError> {
    let net = cfg.network(base)?;
    let row_sum = net
        .row_sum()
        .ok_or_else(|| CliError::Config("network: synchrony needs a constant row sum".into()))?;
    let sync = linear_sync(cfg, row_sum)?;
    let eig = eigen(&net)?;
    let spec = network_spectrum(&sync, &eig, cfg.region(DEFAULT_REGION), cfg.grid(200));
    let mut t = Table::new(&["mu", "re_lambda", "im_lambda", "residual", "class"]);
    for p in &spec.eigenvalues {
        t.push(vec![
            p.mode.into(),
            p.lambda.re.into(),
            p.lambda.im.into(),
            p.residual.into(),
            format!("{:?}", p.class).as_str().into(),
        ]);
    }
    out.table("spectrum.csv", &t)?;
    let verdict = if spec.is_stable() {
        "stable"
    } else {
        "unstable"
    };
    Ok(vec![
        format!(
            "period {:.12}  eigenvalues found {}",
            sync.period,
            spec.eigenvalues.len()
        ),
        format!("max Re lambda {:?}  synchrony {verdict}", spec.max_real()),
    ])
}

fn msf(cfg: &RunConfig, base: &Path, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let (gamma, _) = cfg.linear("msf")?;
    let net = match &cfg.network {
        Some(_) => Some(cfg.network(base)?),
        None => None,
    };
    let row_sum = match &net {
        Some(n) => n.row_sum().ok_or_else(|| {
            CliError::Config("network: synchrony needs a constant row sum".into())
        })?,
        None => cfg.analysis.row_sums.first().copied().unwrap_or(0.0),
    };
    let sync = linear_sync(cfg, row_sum)?;
    let ctx = MsfContext::from_sync(&sync)?;
    let region = cfg.region(Region::new(-20.0, 10.0, -30.0, 30.0));
    let n = cfg.grid(120);
    let g = msf_grid(region, n, n, &ctx)?;
    let mut t = Table::new(&["re_beta", "im_beta", "msf"]);
    for j in 0..=g.ny {
        for i in 0..=g.nx {
            t.push(vec![g.re(i).into(), g.im(j).into(), g.value(i, j).into()]);
        }
    }
    out.table("msf.csv", &t)?;
    let mut c = Table::new(&["segment", "re_beta", "im_beta"]);
    for (k, seg) in g.contour.iter().enumerate() {
        for p in seg {
            c.push(vec![k.into(), p.0.into(), p.1.into()]);
        }
    }
    out.table("msf_contour.csv", &c)?;
    let mut notes = vec![format!(
        "period {:.12}  contour segments {}",
        sync.period,
        g.contour.len()
    )];
    if let Some(net) = net {
        let eig = eigen(&net)?;
        let mut e = Table::new(&["mu", "re_beta", "im_beta", "msf"]);
        let u = eig.uniform_mode();
        let mut worst = f64::NEG_INFINITY;
        for (mu, w) in eig.eigenvalues.iter().enumerate() {
            let beta = *w * gamma;
            let v = msf_reduced(beta, &ctx)?;
            if mu != u {
                worst = worst.max(v);
            }
            e.push(vec![mu.into(), beta.re.into(), beta.im.into(), v.into()]);
        }
        out.table("msf_network.csv", &e)?;
        notes.push(format!("largest transverse MSF {worst:.6e}"));
    }
    Ok(notes)
}

fn wave_model(cfg: &RunConfig, inv_v: f64) -> Result<WaveModel, CliError> {
    Ok(WaveModel::new(
        cfg.synapse()?,
        cfg.spatial_kernel()?,
        cfg.nonlinearity(),
        inv_v,
    )?)
}

fn dispersion(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let inv_vs = if cfg.analysis.inv_vs.is_empty() {
        vec![cfg.model.inv_v]
    } else {
        cfg.analysis.inv_vs.clone()
    };
    let rhos = match (cfg.analysis.rhos, cfg.analysis.rho) {
        (Some(s), _) => s.values(),
        (None, Some(r)) => vec![r],
        (None, None) => return Err(CliError::Config("analysis.rhos: required".into())),
    };
    let models = inv_vs
        .iter()
        .map(|&iv| wave_model(cfg, iv))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, f64)> = (0..models.len())
        .flat_map(|m| rhos.iter().map(move |&r| (m, r)))
        .collect();
    let roots: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(m, r)| dispersion_solve(r, &models[m]).unwrap_or_default())
        .collect();
    let mut t = Table::new(&["v[x/t]", "inv_v[t/x]", "rho[t/x]", "T[t]", "branch"]);
    for (&(m, r), ts) in jobs.iter().zip(&roots) {
        let iv = inv_vs[m];
        for (b, &p) in ts.iter().enumerate() {
            t.push(vec![
                (1.0 / iv).into(),
                iv.into(),
                r.into(),
                p.into(),
                b.into(),
            ]);
        }
    }
    out.table("dispersion.csv", &t)?;
    Ok(vec![format!(
        "{} speeds x {} wave numbers, {} periods",
        inv_vs.len(),
        rhos.len(),
        t.rows.len()
    )])
}

fn turing(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let (_, theta) = cfg.linear("turing")?;
    let w = cfg.spatial_kernel()?;
    let alphas = cfg
        .analysis
        .alphas
        .map(|s| s.values())
        .unwrap_or_else(|| vec![cfg.model.alpha]);
    let pts = critical_curve(&w, theta, &alphas)?;
    let mut t = Table::new(&["alpha[1/t]", "gamma_c", "k_c[1/x]", "omega_c", "kind"]);
    for (a, p) in alphas.iter().zip(&pts) {
        t.push(vec![
            (*a).into(),
            p.value.into(),
            p.k_c.into(),
            p.omega_c.into(),
            p.kind.label().into(),
        ]);
    }
    out.table("critical_curve.csv", &t)?;
    let mut notes = vec![format!(
        "k_c {:.12}",
        pts.first().map(|p| p.k_c).unwrap_or(f64::NAN)
    )];
    if !cfg.analysis.ks.is_empty() {
        let ctx = TuringContext::new(wave_model(cfg, cfg.model.inv_v)?)?;
        let region = cfg.region(Region::new(-25.0, 5.0, -PI - 0.1, PI + 0.1));
        let spec = spectrum(&cfg.analysis.ks, &ctx, region, cfg.grid(200));
        let mut s = Table::new(&["k[1/x]", "re_lambda", "im_lambda"]);
        for kr in &spec.per_k {
            for z in &kr.roots {
                s.push(vec![kr.k.into(), z.z.re.into(), z.z.im.into()]);
            }
        }
        out.table("turing_spectrum.csv", &s)?;
        notes.push(format!(
            "period {:.12}  max Re lambda {:?}",
            ctx.period(),
            spec.max_real()
        ));
    }
    Ok(notes)
}

fn bump_rows(
    param: &[f64],
    solve: impl Fn(f64) -> (f64, lighthouse_core::Result<Vec<SpikeBump>>) + Sync,
    w: &lighthouse_core::field::SpatialKernel,
    grid: usize,
) -> Table {
    let rows: Vec<Vec<Vec<Cell>>> = param
        .par_iter()
        .map(|&p| {
            let (alpha, res) = solve(p);
            let Ok(bumps) = res else { return Vec::new() };
            bumps
                .iter()
                .map(|b| {
                    let stable = spike_bump_spectrum(b, w, default_bump_region(alpha), grid)
                        .map(|s| s.is_stable());
                    let flag: Cell = match stable {
                        Ok(s) => s.into(),
                        Err(_) => "NaN".into(),
                    };
                    vec![p.into(), b.delta.into(), b.branch.label().into(), flag]
                })
                .collect()
        })
        .collect();
    let mut t = Table::new(&["param", "delta[x]", "branch", "stable"]);
    for r in rows.into_iter().flatten() {
        t.push(r);
    }
    t
}

fn bump(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let h = cfg.heaviside_h("bump")?;
    let w = cfg.spatial_kernel()?;
    let m = harmonics(cfg);
    // Stability along a sweep only needs the sign of the leading root.
    let grid = cfg.grid(200).div_ceil(2);
    let alpha = cfg.model.alpha;
    let mut notes = Vec::new();
    if let Some(rs) = cfg.analysis.rhos {
        let mut t = bump_rows(
            &rs.values(),
            |r| (alpha, spike_bump_solve(r, h, &w, alpha, m)),
            &w,
            grid,
        );
        t.header[0] = "rho[t/x]";
        notes.push(format!(
            "rho sweep at alpha {alpha}: {} widths",
            t.rows.len()
        ));
        out.table("bump_rho.csv", &t)?;
    }
    if let (Some(al), Some(rho)) = (cfg.analysis.alphas, cfg.analysis.rho) {
        let mut t = bump_rows(
            &al.values(),
            |a| (a, spike_bump_solve(rho, h, &w, a, m)),
            &w,
            grid,
        );
        t.header[0] = "alpha[1/t]";
        notes.push(format!("alpha sweep at rho {rho}: {} widths", t.rows.len()));
        out.table("bump_alpha.csv", &t)?;
    }
    if notes.is_empty() {
        return Err(CliError::Config(
            "analysis: bump needs rhos, or alphas with rho".into(),
        ));
    }
    Ok(notes)
}

fn bump_spectrum(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let h = cfg.heaviside_h("bump-spectrum")?;
    let w = cfg.spatial_kernel()?;
    let rho = cfg.rho()?;
    let alpha = cfg.model.alpha;
    let bumps = spike_bump_solve(rho, h, &w, alpha, harmonics(cfg))?;
    let region = cfg.region(default_bump_region(alpha));
    let grid = cfg.grid(200);
    let mut t = Table::new(&[
        "delta[x]",
        "branch",
        "edge",
        "re_lambda",
        "im_lambda",
        "residual",
        "class",
    ]);
    let mut lv = Table::new(&[
        "delta[x]",
        "branch",
        "edge",
        "re_lambda",
        "im_lambda",
        "re_E",
        "im_E",
    ]);
    let nl = grid.min(100);
    let mut notes = Vec::new();
    for b in &bumps {
        let spec = spike_bump_spectrum(b, &w, region, grid)?;
        for (edge, res) in [("plus", &spec.plus), ("minus", &spec.minus)] {
            for p in &res.eigenvalues {
                t.push(vec![
                    b.delta.into(),
                    b.branch.label().into(),
                    edge.into(),
                    p.lambda.re.into(),
                    p.lambda.im.into(),
                    p.residual.into(),
                    format!("{:?}", p.class).as_str().into(),
                ]);
            }
        }
        let e = BumpEdge::new(b, &w)?;
        for (edge, plus) in [("plus", true), ("minus", false)] {
            for j in 0..=nl {
                for i in 0..=nl {
                    let l = C64::new(
                        region.re_min + (region.re_max - region.re_min) * i as f64 / nl as f64,
                        region.im_min + (region.im_max - region.im_min) * j as f64 / nl as f64,
                    );
                    let v = e.e(l, plus);
                    lv.push(vec![
                        b.delta.into(),
                        b.branch.label().into(),
                        edge.into(),
                        l.re.into(),
                        l.im.into(),
                        v.re.into(),
                        v.im.into(),
                    ]);
                }
            }
        }
        let verdict = if spec.is_stable() {
            "stable"
        } else {
            "unstable"
        };
        notes.push(format!(
            "{} bump width {:.9}: {verdict}, max Re lambda {:?}",
            b.branch.label(),
            b.delta,
            spec.max_real()
        ));
    }
    out.table("bump_spectrum.csv", &t)?;
    out.table("bump_levelset.csv", &lv)?;
    Ok(notes)
}

fn rate_bump(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let h = cfg.heaviside_h("rate-bump")?;
    let w = cfg.spatial_kernel()?;
    let alpha = cfg.model.alpha;
    let mut t = Table::new(&["delta[x]", "branch", "edge", "re_lambda", "im_lambda"]);
    let mut notes = Vec::new();
    for b in rate_bump_width(h, &w)? {
        let sp = rate_bump_spectrum(&b, &w, alpha)?;
        for (edge, roots) in [("plus", sp.plus), ("minus", sp.minus)] {
            for l in roots {
                t.push(vec![
                    b.delta.into(),
                    b.branch.label().into(),
                    edge.into(),
                    l.re.into(),
                    l.im.into(),
                ]);
            }
        }
        let verdict = if sp.is_stable() { "stable" } else { "unstable" };
        notes.push(format!(
            "{} rate bump width {:.9}: {verdict}",
            b.branch.label(),
            b.delta
        ));
    }
    out.table("rate_bump.csv", &t)?;
    Ok(notes)
}

fn wander(cfg: &RunConfig, out: &mut Outputs) -> Result<Vec<String>, CliError> {
    let domain = cfg.domain()?;
    let s = cfg.sim_section()?;
    let wc = WanderConfig {
        w: cfg.spatial_kernel()?,
        s: cfg.nonlinearity(),
        h: bump_h(cfg)?,
        rho: cfg.rho()?,
        n_mesh: domain.n_mesh,
        half_length: domain.half_length,
        alpha0: cfg.model.alpha,
        alpha1: s.alpha_after.unwrap_or(cfg.model.alpha),
        switch: s.alpha_after.is_some(),
        dt: s.dt,
        t_end: s.t_end,
        harmonics: harmonics(cfg),
    };
    let res = run_wandering_protocol(&wc)?;
    out.table("raster.csv", &raster_table(&res.raster, "position[x]"))?;
    let period = 2.0 * PI;
    let before = res.raster.active_nodes(res.t_switch - period, res.t_switch);
    let after = res.raster.active_nodes(wc.t_end - period, wc.t_end);
    let mut notes = vec![format!(
        "seeded width {:.6}, switch at t = {:.6}",
        res.delta, res.t_switch
    )];
    notes.push(format!(
        "active nodes: {} before the switch, {} in the last period",
        before.len(),
        after.len()
    ));
    notes.extend(raster_summary(&res.raster));
    Ok(notes)
}
