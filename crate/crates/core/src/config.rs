//! Run configuration, read from a TOML document.
//!
//! Every key is optional; omitted keys take the defaults below and unknown
//! keys are rejected.
//!
//! ```toml
//! dt = 1e-4
//! t_final = 1.0
//! gradient = 3.0
//! method = "spectral"
//! epsilon = 1e-6
//!
//! [grid]
//! z_min = -16.0
//! z_max = 16.0
//! n_points = 2048
//!
//! [experiment]
//! half_width = 0.05
//! scan_min = -4.0
//! scan_max = 4.0
//! scan_count = 81
//! shots = 10000
//!
//! [converge]
//! dt_coarse = 4e-3
//! rungs = 3
//! methods = ["spectral", "implicit"]
//!
//! [output]
//! wavefunction = "wavefunction.csv"
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{make_grid, SpatialGrid};
use crate::integrator::Method;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            z_min: -16.0,
            z_max: 16.0,
            n_points: 2048,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<SpatialGrid> {
        make_grid(self.z_min, self.z_max, self.n_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub half_width: f64,
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_count: usize,
    /// Analyzer shots per hole position for the seeded click sampler.
    pub shots: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            half_width: 0.05,
            scan_min: -4.0,
            scan_max: 4.0,
            scan_count: 81,
            shots: 10_000,
        }
    }
}

impl ExperimentSpec {
    pub fn centers(&self) -> Vec<f64> {
        if self.scan_count == 1 {
            return vec![self.scan_min];
        }
        let step = (self.scan_max - self.scan_min) / (self.scan_count - 1) as f64;
        (0..self.scan_count)
            .map(|i| self.scan_min + step * i as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeSpec {
    /// Largest time step of the ladder; each further rung halves it.
    pub dt_coarse: f64,
    pub rungs: usize,
    pub methods: Vec<Method>,
}

impl Default for ConvergeSpec {
    fn default() -> Self {
        ConvergeSpec {
            dt_coarse: 4e-3,
            rungs: 3,
            methods: vec![Method::Spectral, Method::Implicit],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub wavefunction: String,
    pub initial_wavefunction: String,
    pub observables: String,
    pub texture: String,
    pub twist: String,
    pub scan: String,
    pub clicks: String,
    pub convergence: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            wavefunction: "wavefunction.csv".into(),
            initial_wavefunction: "wavefunction_t0.csv".into(),
            observables: "observables.json".into(),
            texture: "texture.csv".into(),
            twist: "twist.csv".into(),
            scan: "scan.csv".into(),
            clicks: "clicks.csv".into(),
            convergence: "convergence.csv".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_final: f64,
    /// Coefficient `g` of the linear potential `∓ g z`.
    pub gradient: f64,
    pub method: Method,
    /// Texture reliability threshold relative to the peak density.
    pub epsilon: f64,
    pub experiment: ExperimentSpec,
    pub converge: ConvergeSpec,
    pub output: OutputSpec,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            grid: GridSpec::default(),
            dt: 1e-4,
            t_final: 1.0,
            gradient: 3.0,
            method: Method::Spectral,
            epsilon: 1e-6,
            experiment: ExperimentSpec::default(),
            converge: ConvergeSpec::default(),
            output: OutputSpec::default(),
        }
    }
}

fn field_error(text: Option<&str>, table: Option<&str>, key: &str, reason: String) -> Error {
    let name = match table {
        Some(t) => format!("{t}.{key}"),
        None => key.to_string(),
    };
    match text.and_then(|t| locate(t, table, key)) {
        Some(line) => Error::Config(format!("line {line}: field `{name}`: {reason}")),
        None => Error::Config(format!("field `{name}`: {reason}")),
    }
}

/// 1-based line of `key = ...` inside `[table]` (or the root table).
fn locate(text: &str, table: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix('[') {
            current = Some(rest.trim_end_matches(']').trim().to_string());
            continue;
        }
        let in_table = match (table, &current) {
            (None, None) => true,
            (Some(t), Some(c)) => t == c,
            _ => false,
        };
        if in_table {
            if let Some((k, _)) = trimmed.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl SimulationConfig {
    /// Checks every constraint; `source` is used to point diagnostics at a line.
    pub fn validate_with_source(&self, source: Option<&str>) -> Result<()> {
        let err = |table, key, reason: String| Err(field_error(source, table, key, reason));
        if let Err(e) = self.grid.build() {
            let key = if self.grid.n_points < 8 || !self.grid.n_points.is_power_of_two() {
                "n_points"
            } else {
                "z_min"
            };
            return err(Some("grid"), key, e.to_string());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return err(None, "dt", format!("{} must be positive", self.dt));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return err(None, "t_final", format!("{} must be non-negative", self.t_final));
        }
        let steps = (self.t_final / self.dt).round();
        if (steps * self.dt - self.t_final).abs() > 1e-12 * self.t_final.max(1.0) {
            return err(
                None,
                "t_final",
                format!("{} is not an integer multiple of dt = {}", self.t_final, self.dt),
            );
        }
        if !self.gradient.is_finite() {
            return err(None, "gradient", "must be finite".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return err(None, "epsilon", format!("{} must be positive", self.epsilon));
        }
        let x = &self.experiment;
        if !(x.half_width > 0.0 && x.half_width.is_finite()) {
            return err(Some("experiment"), "half_width", format!("{} must be positive", x.half_width));
        }
        if x.scan_count == 0 {
            return err(Some("experiment"), "scan_count", "must be at least 1".into());
        }
        if !(x.scan_min.is_finite() && x.scan_max.is_finite() && x.scan_min <= x.scan_max) {
            return err(Some("experiment"), "scan_max", "scan range must satisfy scan_min <= scan_max".into());
        }
        let c = &self.converge;
        if !(c.dt_coarse > 0.0 && c.dt_coarse.is_finite()) {
            return err(Some("converge"), "dt_coarse", format!("{} must be positive", c.dt_coarse));
        }
        if c.rungs < 2 {
            return err(Some("converge"), "rungs", "need at least 2 rungs".into());
        }
        if c.methods.is_empty() {
            return err(Some("converge"), "methods", "must name at least one method".into());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_source(None)
    }

    pub fn build_grid(&self) -> Result<SpatialGrid> {
        self.grid.build()
    }
}

/// Parses and validates a TOML configuration document.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let config: SimulationConfig =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    config.validate_with_source(Some(text))?;
    Ok(config)
}
