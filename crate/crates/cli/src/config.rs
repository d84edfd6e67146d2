//! Config file schema and the resolved settings after flag overrides.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use subpoisson_core::dispersion::GvdSign;
use subpoisson_core::model::{DEFAULT_HALF_SPAN, DEFAULT_SAMPLES, MAX_WINDOW_RATIO};
use subpoisson_core::scenario::{LabScenario, DEFAULT_C_CONV, DEFAULT_N2};
use subpoisson_core::{QuadratureSpec, TimeGrid};

use crate::args::{Branch, CommonArgs, Engine, Format, Phase};
use crate::error::CliError;
use crate::units::{Dimension, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl RangeSpec {
    pub const fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    /// Equispaced values including both ends; a single value when `min == max`.
    pub fn values(&self) -> Vec<f64> {
        if self.min == self.max {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + k as f64 * step
                }
            })
            .collect()
    }

    fn check(&self, name: &str, lower: Option<f64>, problems: &mut Vec<String>) {
        if !(self.min.is_finite() && self.max.is_finite()) {
            problems.push(format!("{name}: bounds must be finite"));
        }
        if self.steps < 2 {
            problems.push(format!(
                "{name}.steps must be at least 2, got {}",
                self.steps
            ));
        }
        if self.min > self.max {
            problems.push(format!("{name}: min {} exceeds max {}", self.min, self.max));
        }
        if let Some(lo) = lower {
            if self.min < lo {
                problems.push(format!(
                    "{name}.min must be at least {lo}, got {}",
                    self.min
                ));
            }
        }
    }

    fn override_with(&mut self, min: Option<f64>, max: Option<f64>, steps: Option<usize>) {
        self.min = min.unwrap_or(self.min);
        self.max = max.unwrap_or(self.max);
        self.steps = steps.unwrap_or(self.steps);
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub detection: DetectionSection,
    #[serde(default)]
    pub dispersion: DispersionSection,
    pub scenario: Option<ScenarioSection>,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub psi0: Option<f64>,
    pub psi0_range: Option<RangeSpec>,
    /// `tau_p / tau_r`
    pub r_ratio: Option<f64>,
    pub nbar0: Option<f64>,
    pub engine: Option<Engine>,
    pub phase: Option<Phase>,
    pub grid_samples: Option<usize>,
    pub grid_half_span: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionSection {
    /// `T / tau_p`
    pub t_ratio: Option<f64>,
    pub t: Option<f64>,
    pub t_range: Option<RangeSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionSection {
    pub sign: Option<i64>,
    pub phi: Option<f64>,
    pub phi_range: Option<RangeSpec>,
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub omega_nodes: Option<usize>,
    pub tol: Option<f64>,
    pub max_nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub wavelength: Quantity,
    pub peak_intensity: Quantity,
    pub fiber_length: Quantity,
    pub k2_abs: Quantity,
    pub tau_p: Quantity,
    pub sign: Option<i64>,
    /// Defaults to `tau_p / 10`.
    pub tau_r: Option<Quantity>,
    /// Defaults to `tau_p / 8`.
    pub t_window: Option<Quantity>,
    pub n2: Option<Quantity>,
    pub c_conv: Option<f64>,
    pub psi0_override: Option<f64>,
}

impl ScenarioSection {
    pub fn to_lab(&self) -> Result<LabScenario, CliError> {
        let field = |name: &str, q: &Quantity, dim: Dimension| {
            q.to_si(dim)
                .map_err(|e| CliError::Config(format!("scenario.{name}: {e}")))
        };
        let tau_p = field("tau_p", &self.tau_p, Dimension::Time)?;
        let sign = GvdSign::from_value(self.sign.unwrap_or(1))
            .map_err(|e| CliError::Config(format!("scenario.sign: {e}")))?;
        let sc = LabScenario {
            wavelength: field("wavelength", &self.wavelength, Dimension::Length)?,
            peak_intensity: field("peak_intensity", &self.peak_intensity, Dimension::Intensity)?,
            fiber_length: field("fiber_length", &self.fiber_length, Dimension::Length)?,
            n2: self
                .n2
                .as_ref()
                .map(|q| field("n2", q, Dimension::NonlinearIndex))
                .transpose()?
                .unwrap_or(DEFAULT_N2),
            k2_abs: field("k2_abs", &self.k2_abs, Dimension::Gvd)?,
            sign,
            tau_p,
            tau_r: self
                .tau_r
                .as_ref()
                .map(|q| field("tau_r", q, Dimension::Time))
                .transpose()?
                .unwrap_or(tau_p / 10.0),
            t_window: self
                .t_window
                .as_ref()
                .map(|q| field("t_window", q, Dimension::Time))
                .transpose()?
                .unwrap_or(tau_p / 8.0),
            c_conv: self.c_conv.unwrap_or(DEFAULT_C_CONV),
        };
        sc.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(sc)
    }
}

pub fn read_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub psi0: f64,
    pub psi0_range: RangeSpec,
    pub phi: f64,
    pub phi_range: RangeSpec,
    pub t: f64,
    pub t_range: RangeSpec,
    pub sign: GvdSign,
    pub branch: Branch,
    pub engine: Engine,
    pub phase: Phase,
    pub t_ratio: f64,
    pub r_ratio: f64,
    pub nbar0: f64,
    pub grid_samples: usize,
    pub grid_half_span: f64,
    pub quadrature: QuadratureSpec,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub scenario: Option<ScenarioSection>,
    pub psi0_override: Option<f64>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            psi0: 3.0,
            psi0_range: RangeSpec::new(0.5, 6.0, 64),
            phi: 0.2,
            phi_range: RangeSpec::new(0.01, 1.0, 64),
            t: 0.0,
            t_range: RangeSpec::new(-10.0, 10.0, 401),
            sign: GvdSign::Anomalous,
            branch: Branch::default(),
            engine: Engine::default(),
            phase: Phase::default(),
            t_ratio: 0.125,
            r_ratio: 10.0,
            nbar0: 1.0,
            grid_samples: DEFAULT_SAMPLES,
            grid_half_span: DEFAULT_HALF_SPAN,
            quadrature: QuadratureSpec::default(),
            output: None,
            format: Format::default(),
            scenario: None,
            psi0_override: None,
        }
    }
}

impl Settings {
    pub fn load(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        Self::resolve(file, args)
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(file: ConfigFile, args: &CommonArgs) -> Result<Self, CliError> {
        let mut s = Settings::default();
        let mut problems = Vec::new();

        let ConfigFile {
            model,
            detection,
            dispersion,
            scenario,
            quadrature,
            output,
        } = file;
        s.psi0 = args.psi0.or(model.psi0).unwrap_or(s.psi0);
        s.psi0_range = model.psi0_range.unwrap_or(s.psi0_range);
        s.psi0_range
            .override_with(args.psi0_min, args.psi0_max, args.psi0_steps);
        s.r_ratio = args.r_ratio.or(model.r_ratio).unwrap_or(s.r_ratio);
        s.nbar0 = args.nbar0.or(model.nbar0).unwrap_or(s.nbar0);
        s.engine = args.engine.or(model.engine).unwrap_or(s.engine);
        s.phase = args.phase.or(model.phase).unwrap_or(s.phase);
        s.grid_samples = args
            .grid_samples
            .or(model.grid_samples)
            .unwrap_or(s.grid_samples);
        s.grid_half_span = args
            .grid_half_span
            .or(model.grid_half_span)
            .unwrap_or(s.grid_half_span);

        s.t_ratio = args.t_ratio.or(detection.t_ratio).unwrap_or(s.t_ratio);
        s.t = args.time.or(detection.t).unwrap_or(s.t);
        s.t_range = detection.t_range.unwrap_or(s.t_range);
        s.t_range
            .override_with(args.time_min, args.time_max, args.time_steps);

        match args
            .sign
            .or(dispersion.sign)
            .map(GvdSign::from_value)
            .transpose()
        {
            Ok(sign) => s.sign = sign.unwrap_or(s.sign),
            Err(_) => problems.push("dispersion.sign must be +1 or -1".to_owned()),
        }
        s.phi = args.phi.or(dispersion.phi).unwrap_or(s.phi);
        s.phi_range = dispersion.phi_range.unwrap_or(s.phi_range);
        s.phi_range
            .override_with(args.phi_min, args.phi_max, args.phi_steps);
        s.branch = args.branch.or(dispersion.branch).unwrap_or(s.branch);

        s.quadrature = QuadratureSpec {
            omega_nodes: args
                .omega_nodes
                .or(quadrature.omega_nodes)
                .unwrap_or(s.quadrature.omega_nodes),
            tol: args.tol.or(quadrature.tol).unwrap_or(s.quadrature.tol),
            max_nodes: args
                .max_nodes
                .or(quadrature.max_nodes)
                .unwrap_or(s.quadrature.max_nodes),
        };
        s.output = args.output.clone().or(output.path);
        s.format = args.format.or(output.format).unwrap_or(s.format);
        s.psi0_override = args
            .psi0_override
            .or(scenario.as_ref().and_then(|sc| sc.psi0_override));
        s.scenario = scenario;

        s.collect_problems(&mut problems);
        if problems.is_empty() {
            Ok(s)
        } else {
            Err(CliError::Config(problems.join("; ")))
        }
    }

    fn collect_problems(&self, problems: &mut Vec<String>) {
        if !(self.psi0 >= 0.0 && self.psi0.is_finite()) {
            problems.push(format!(
                "model.psi0 must be non-negative, got {}",
                self.psi0
            ));
        }
        self.psi0_range
            .check("model.psi0_range", Some(0.0), problems);
        if !(self.r_ratio > 1.0 && self.r_ratio.is_finite()) {
            problems.push(format!(
                "model.r_ratio (tau_p / tau_r) must exceed 1, got {}",
                self.r_ratio
            ));
        }
        if !(self.nbar0 > 0.0 && self.nbar0.is_finite()) {
            problems.push(format!("model.nbar0 must be positive, got {}", self.nbar0));
        }
        if let Err(e) = self.grid() {
            problems.push(format!("model.grid_samples / model.grid_half_span: {e}"));
        }
        if !(self.t_ratio > 0.0 && self.t_ratio <= MAX_WINDOW_RATIO) {
            problems.push(format!(
                "detection.t_ratio must lie in (0, {MAX_WINDOW_RATIO}], got {}",
                self.t_ratio
            ));
        }
        if !self.t.is_finite() {
            problems.push("detection.t must be finite".to_owned());
        }
        self.t_range.check("detection.t_range", None, problems);
        if !(self.phi >= 0.0 && self.phi.is_finite()) {
            problems.push(format!(
                "dispersion.phi must be non-negative, got {}",
                self.phi
            ));
        }
        self.phi_range
            .check("dispersion.phi_range", Some(0.0), problems);
        if let Err(e) = self.quadrature.validate() {
            problems.push(format!("quadrature: {e}"));
        }
        if let Some(p) = self.psi0_override {
            if !(p > 0.0 && p.is_finite()) {
                problems.push(format!("scenario.psi0_override must be positive, got {p}"));
            }
        }
    }

    pub fn grid(&self) -> Result<TimeGrid, subpoisson_core::Error> {
        let g = TimeGrid::centered(self.grid_samples, self.grid_half_span)?;
        g.ensure_covers(subpoisson_core::model::MIN_HALF_SPAN)?;
        Ok(g)
    }
}
