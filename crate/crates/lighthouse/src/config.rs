//! Run configuration: a TOML tree, validated field by field.
//!
//! Units: times in the model's time unit, rates (`alpha`) in inverse time,
//! lengths in the field's space unit, `inv_v` in time per unit length.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use lighthouse_core::field::{FieldDomain, SpatialKernel};
use lighthouse_core::kernels::{Nonlinearity, SynapseKernel};
use lighthouse_core::network::{
    alternating_generator, build_circulant, build_global, GraphNetwork,
};
use lighthouse_core::numeric::levelset::Region;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub nonlinearity: NonlinearityConfig,
    /// Synaptic rate, 1/time.
    pub alpha: f64,
    /// Uniform graph delay, time.
    #[serde(default)]
    pub tau: f64,
    /// Inverse axonal speed for fields; 0 is instantaneous.
    #[serde(default)]
    pub inv_v: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NonlinearityConfig {
    Smooth { r: f64, h: f64 },
    Linear { gamma: f64, theta: f64 },
    Heaviside { h: f64 },
}

impl NonlinearityConfig {
    pub fn to_core(self) -> Nonlinearity {
        match self {
            NonlinearityConfig::Smooth { r, h } => Nonlinearity::SmoothExp { r, h },
            NonlinearityConfig::Linear { gamma, theta } => Nonlinearity::Linear { gamma, theta },
            NonlinearityConfig::Heaviside { h } => Nonlinearity::Heaviside { h },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum NetworkConfig {
    /// `w_ij = (row_sum + 1) delta_ij - 1/n`.
    Global { n: usize, row_sum: f64 },
    /// Row generator of a circulant matrix.
    Circulant { c: Vec<f64> },
    /// Generator `(0, -eps, eps, ...)`.
    Alternating { n: usize, eps: f64 },
    /// Row-major dense weights.
    Matrix { n: usize, weights: Vec<f64> },
    /// Dense weights from CSV (one row per line) or a one-line circulant generator.
    File {
        path: String,
        #[serde(default)]
        circulant: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub amp: f64,
    pub sigma: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub kernel: KernelConfig,
    #[serde(default = "default_mesh")]
    pub n_mesh: usize,
    /// Half-length `L`; if absent, `turing_wavelengths` fixes `2L = n 2 pi / k_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turing_wavelengths: Option<f64>,
}

fn default_mesh() -> usize {
    1024
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Synchronous,
    Quiescent,
    Bump,
    Wave,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_init")]
    pub init: InitKind,
    /// Half-width of the uniform initial phase perturbation.
    #[serde(default)]
    pub perturbation: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_times: Vec<f64>,
    /// Rate used after the first fifth of the run (wander only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_after: Option<f64>,
}

fn default_init() -> InitKind {
    InitKind::Synchronous
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.n <= 1 {
            return vec![self.min];
        }
        (0..self.n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_sums: Vec<f64>,
    /// `[re_min, re_max, im_min, im_max]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhos: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inv_vs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ks: Vec<f64>,
    /// Harmonic truncation `M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonics: Option<usize>,
}

fn bad(field: &str, msg: &str) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn positive(field: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad(field, &format!("must be positive and finite, got {x}")))
    }
}

fn finite(field: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(bad(field, "must be finite"))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let m = &self.model;
        positive("model.alpha", m.alpha)?;
        if !(m.tau >= 0.0 && m.tau.is_finite()) {
            return Err(bad("model.tau", "must be non-negative"));
        }
        if !(m.inv_v >= 0.0 && m.inv_v.is_finite()) {
            return Err(bad("model.inv_v", "must be non-negative"));
        }
        match m.nonlinearity {
            NonlinearityConfig::Smooth { r, h } => {
                positive("model.nonlinearity.r", r)?;
                finite("model.nonlinearity.h", h)?;
            }
            NonlinearityConfig::Linear { gamma, theta } => {
                finite("model.nonlinearity.gamma", gamma)?;
                finite("model.nonlinearity.theta", theta)?;
            }
            NonlinearityConfig::Heaviside { h } => finite("model.nonlinearity.h", h)?,
        }
        if let Some(net) = &self.network {
            match net {
                NetworkConfig::Global { n, row_sum } => {
                    if *n == 0 {
                        return Err(bad("network.n", "must be at least 1"));
                    }
                    finite("network.row_sum", *row_sum)?;
                }
                NetworkConfig::Circulant { c } => {
                    if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
                        return Err(bad(
                            "network.c",
                            "must be a non-empty list of finite weights",
                        ));
                    }
                }
                NetworkConfig::Alternating { n, eps } => {
                    if *n < 2 {
                        return Err(bad("network.n", "must be at least 2"));
                    }
                    finite("network.eps", *eps)?;
                }
                NetworkConfig::Matrix { n, weights } => {
                    if *n == 0 || weights.len() != n * n {
                        return Err(bad("network.weights", "must hold n*n entries"));
                    }
                }
                NetworkConfig::File { .. } => {}
            }
        }
        if let Some(f) = &self.field {
            positive("field.kernel.sigma", f.kernel.sigma)?;
            finite("field.kernel.amp", f.kernel.amp)?;
            finite("field.kernel.total", f.kernel.total)?;
            if f.n_mesh < 4 {
                return Err(bad("field.n_mesh", "must be at least 4"));
            }
            match (f.half_length, f.turing_wavelengths) {
                (Some(l), None) => positive("field.half_length", l)?,
                (None, Some(n)) => positive("field.turing_wavelengths", n)?,
                _ => {
                    return Err(bad(
                        "field",
                        "set exactly one of half_length and turing_wavelengths",
                    ))
                }
            }
        }
        if let Some(s) = &self.sim {
            positive("sim.dt", s.dt)?;
            positive("sim.t_end", s.t_end)?;
            if !(s.perturbation >= 0.0 && s.perturbation.is_finite()) {
                return Err(bad("sim.perturbation", "must be non-negative"));
            }
            if let Some(a) = s.alpha_after {
                positive("sim.alpha_after", a)?;
            }
        }
        let a = &self.analysis;
        for (name, sw) in [("analysis.alphas", &a.alphas), ("analysis.rhos", &a.rhos)] {
            if let Some(sw) = sw {
                finite(name, sw.min)?;
                finite(name, sw.max)?;
                if sw.n == 0 {
                    return Err(bad(name, "n must be at least 1"));
                }
            }
        }
        if let Some(al) = &a.alphas {
            if al.min <= 0.0 {
                return Err(bad("analysis.alphas", "rates must be positive"));
            }
        }
        if let Some(r) = a.region {
            if r.iter().any(|x| !x.is_finite()) || r[0] >= r[1] || r[2] >= r[3] {
                return Err(bad(
                    "analysis.region",
                    "must be [re_min, re_max, im_min, im_max] with min < max",
                ));
            }
        }
        if a.grid == Some(0) {
            return Err(bad("analysis.grid", "must be positive"));
        }
        if a.inv_vs.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(bad("analysis.inv_vs", "must be non-negative"));
        }
        if a.harmonics == Some(0) {
            return Err(bad("analysis.harmonics", "must be positive"));
        }
        Ok(())
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.model.nonlinearity.to_core()
    }

    pub fn synapse(&self) -> Result<SynapseKernel, CliError> {
        Ok(SynapseKernel::new(self.model.alpha)?)
    }

    pub fn linear(&self, command: &str) -> Result<(f64, f64), CliError> {
        match self.model.nonlinearity {
            NonlinearityConfig::Linear { gamma, theta } => Ok((gamma, theta)),
            _ => Err(bad(
                "model.nonlinearity",
                &format!("`{command}` needs kind = \"linear\""),
            )),
        }
    }

    pub fn heaviside_h(&self, command: &str) -> Result<f64, CliError> {
        match self.model.nonlinearity {
            NonlinearityConfig::Heaviside { h } => Ok(h),
            _ => Err(bad(
                "model.nonlinearity",
                &format!("`{command}` needs kind = \"heaviside\""),
            )),
        }
    }

    pub fn network(&self, base: &Path) -> Result<GraphNetwork, CliError> {
        let net = self
            .network
            .as_ref()
            .ok_or_else(|| bad("network", "section required"))?;
        let g = match net {
            NetworkConfig::Global { n, row_sum } => build_global(*n, *row_sum)?,
            NetworkConfig::Circulant { c } => build_circulant(c)?,
            NetworkConfig::Alternating { n, eps } => {
                build_circulant(&alternating_generator(*n, *eps))?
            }
            NetworkConfig::Matrix { n, weights } => {
                GraphNetwork::from_weights(*n, weights.clone())?
            }
            NetworkConfig::File { path, circulant } => {
                let rows = read_matrix(&base.join(path))?;
                if *circulant {
                    if rows.len() != 1 {
                        return Err(bad(
                            "network.path",
                            "a circulant generator is a single CSV row",
                        ));
                    }
                    build_circulant(&rows[0])?
                } else {
                    let n = rows.len();
                    if rows.iter().any(|r| r.len() != n) {
                        return Err(bad("network.path", "weight matrix must be square"));
                    }
                    GraphNetwork::from_weights(n, rows.concat())?
                }
            }
        };
        if self.model.tau > 0.0 {
            Ok(g.with_delay(self.model.tau)?)
        } else {
            Ok(g)
        }
    }

    pub fn field_section(&self) -> Result<&FieldConfig, CliError> {
        self.field
            .as_ref()
            .ok_or_else(|| bad("field", "section required"))
    }

    pub fn spatial_kernel(&self) -> Result<SpatialKernel, CliError> {
        let k = &self.field_section()?.kernel;
        Ok(SpatialKernel::new(k.amp, k.sigma, k.total)?)
    }

    pub fn domain(&self) -> Result<FieldDomain, CliError> {
        let f = self.field_section()?;
        let half = match (f.half_length, f.turing_wavelengths) {
            (Some(l), _) => l,
            (None, Some(n)) => {
                let kc = self.spatial_kernel()?.k_max();
                if kc <= 0.0 {
                    return Err(bad(
                        "field.turing_wavelengths",
                        "kernel transform peaks at k = 0",
                    ));
                }
                n * PI / kc
            }
            (None, None) => unreachable!("validated"),
        };
        Ok(FieldDomain::new(f.n_mesh, half)?)
    }

    pub fn sim_section(&self) -> Result<&SimSection, CliError> {
        self.sim
            .as_ref()
            .ok_or_else(|| bad("sim", "section required"))
    }

    pub fn region(&self, default: Region) -> Region {
        match self.analysis.region {
            Some([a, b, c, d]) => Region::new(a, b, c, d),
            None => default,
        }
    }

    pub fn grid(&self, default: usize) -> usize {
        self.analysis.grid.unwrap_or(default)
    }

    pub fn rho(&self) -> Result<f64, CliError> {
        self.analysis
            .rho
            .ok_or_else(|| bad("analysis.rho", "required"))
    }

    /// Named parameters in the notation of the figure captions.
    pub fn caption_view(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            out.insert(k.to_string(), v);
        };
        put("alpha", self.model.alpha);
        put("tau", self.model.tau);
        put("inv_v", self.model.inv_v);
        match self.model.nonlinearity {
            NonlinearityConfig::Smooth { r, h } => {
                put("r", r);
                put("h", h);
            }
            NonlinearityConfig::Linear { gamma, theta } => {
                put("gamma", gamma);
                put("Theta", theta);
            }
            NonlinearityConfig::Heaviside { h } => put("h", h),
        }
        match &self.network {
            Some(NetworkConfig::Global { n, row_sum }) => {
                put("N", *n as f64);
                put("Gamma", *row_sum);
            }
            Some(NetworkConfig::Alternating { n, eps }) => {
                put("N", *n as f64);
                put("eps", *eps);
            }
            _ => {}
        }
        if let Some(f) = &self.field {
            put("A", f.kernel.amp);
            put("sigma", f.kernel.sigma);
            put("Gamma", f.kernel.total);
            put("n_mesh", f.n_mesh as f64);
            if let Some(l) = f.half_length {
                put("L", l);
            }
            if let Some(n) = f.turing_wavelengths {
                put("turing_wavelengths", n);
            }
        }
        if let Some(s) = &self.sim {
            if let Some(a) = s.alpha_after {
                put("alpha_after", a);
            }
        }
        if let Some(m) = self.analysis.harmonics {
            put("M", m as f64);
        }
        if let Some(r) = self.analysis.rho {
            put("rho", r);
        }
        out
    }
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| bad("network.path", &e.to_string()))?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad("network.path", &e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| bad("network.path", &format!("not a number: {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("network.path", "empty file"));
    }
    Ok(rows)
}
