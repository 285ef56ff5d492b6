//! Scenario configuration: a flat `key = value` file with command-line
//! overrides layered on top.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use osg::oracle::{GridConfig, DEFAULT_GRID_POINTS};
use osg::{InitialState, PhysicalParams};

use crate::CliError;

/// Default coupling in 1/s; the figure setup leaves it open.
pub const DEFAULT_EPSILON: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Quantized translation with which-way decoherence.
    Sg,
    /// Atoms at fixed positions.
    Jc,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Sg => "sg",
            Model::Jc => "jc",
        })
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sg" => Ok(Model::Sg),
            "jc" => Ok(Model::Jc),
            other => Err(format!("expected sg or jc, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mass: f64,
    pub wavelength: f64,
    pub epsilon: f64,
    /// Centers and widths default to a tenth of the wavelength.
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub sigma_x1: Option<f64>,
    pub sigma_x2: Option<f64>,
    pub p1: f64,
    pub p2: f64,
    pub model: Model,
    pub initial_state: InitialState,
    /// Interaction-time grid in Rabi periods.
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub output: Option<PathBuf>,
    pub verify: bool,
    pub svg: bool,
    pub grid_points: usize,
    /// Overrides every verification tolerance when set.
    pub tolerance: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let p = PhysicalParams::figure1(DEFAULT_EPSILON);
        Self {
            mass: p.mass,
            wavelength: p.wavelength,
            epsilon: p.epsilon,
            x1: None,
            x2: None,
            sigma_x1: None,
            sigma_x2: None,
            p1: 0.0,
            p2: 0.0,
            model: Model::Sg,
            initial_state: InitialState::Gg1,
            t_start: 0.0,
            t_end: 2.0,
            steps: 401,
            output: None,
            verify: false,
            svg: false,
            grid_points: DEFAULT_GRID_POINTS,
            tolerance: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("{key}: cannot parse {value:?}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(CliError::Usage(format!("{key}: expected a boolean, got {other:?}"))),
    }
}

impl ScenarioConfig {
    /// Sets one field by its file key. Hyphens and underscores are
    /// interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let norm = key.trim().replace('-', "_").to_ascii_lowercase();
        match norm.as_str() {
            "mass" => self.mass = parse_num(key, value)?,
            "lambda" | "wavelength" => self.wavelength = parse_num(key, value)?,
            "epsilon" => self.epsilon = parse_num(key, value)?,
            "x1" => self.x1 = Some(parse_num(key, value)?),
            "x2" => self.x2 = Some(parse_num(key, value)?),
            "sigma_x1" => self.sigma_x1 = Some(parse_num(key, value)?),
            "sigma_x2" => self.sigma_x2 = Some(parse_num(key, value)?),
            "p1" => self.p1 = parse_num(key, value)?,
            "p2" => self.p2 = parse_num(key, value)?,
            "model" => self.model = value.parse().map_err(|e| CliError::Usage(format!("{key}: {e}")))?,
            "initial_state" => {
                self.initial_state = value
                    .trim()
                    .parse()
                    .map_err(|e| CliError::Usage(format!("{key}: {e}")))?
            }
            "t_start" => self.t_start = parse_num(key, value)?,
            "t_end" => self.t_end = parse_num(key, value)?,
            "steps" => self.steps = parse_num(key, value)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "verify" => self.verify = parse_bool(key, value)?,
            "svg" => self.svg = parse_bool(key, value)?,
            "grid_points" => self.grid_points = parse_num(key, value)?,
            "tolerance" => self.tolerance = Some(parse_num(key, value)?),
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    /// Physical parameters with times zeroed.
    pub fn params(&self) -> PhysicalParams {
        let tenth = self.wavelength / 10.0;
        PhysicalParams {
            mass: self.mass,
            wavelength: self.wavelength,
            epsilon: self.epsilon,
            x1: self.x1.unwrap_or(tenth),
            x2: self.x2.unwrap_or(tenth),
            p1: self.p1,
            p2: self.p2,
            sigma_x1: self.sigma_x1.unwrap_or(tenth),
            sigma_x2: self.sigma_x2.unwrap_or(tenth),
            ..PhysicalParams::figure1(self.epsilon)
        }
    }

    pub fn grid(&self) -> GridConfig {
        GridConfig::with_points(self.grid_points)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Usage(format!("steps: need at least 2, got {}", self.steps)));
        }
        if self.t_start.is_nan() || self.t_start < 0.0 {
            return Err(CliError::Usage(format!("t_start: must be >= 0, got {}", self.t_start)));
        }
        if !self.t_end.is_finite() || self.t_end <= self.t_start {
            return Err(CliError::Usage(format!(
                "t_end: must exceed t_start = {}, got {}",
                self.t_start, self.t_end
            )));
        }
        if self.grid_points < 2 {
            return Err(CliError::Usage(format!("grid_points: need at least 2, got {}", self.grid_points)));
        }
        if let Some(t) = self.tolerance {
            if t.is_nan() || t < 0.0 {
                return Err(CliError::Usage(format!("tolerance: must be >= 0, got {t}")));
            }
        }
        let p = self.params();
        p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if !p.rabi_period().is_finite() {
            return Err(CliError::Usage("x1: the first packet sits on the node, so the Rabi period is undefined".into()));
        }
        Ok(())
    }

    /// Interaction times in Rabi periods, evenly spaced and inclusive.
    pub fn t_grid(&self) -> Vec<f64> {
        let h = (self.t_end - self.t_start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.t_start + i as f64 * h).collect()
    }

    /// Config echo for sidecar files, one `key = value` per line.
    pub fn echo(&self) -> String {
        let p = self.params();
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("mass", format!("{:e}", p.mass));
        put("lambda", format!("{:e}", p.wavelength));
        put("epsilon", format!("{:e}", p.epsilon));
        put("x1", format!("{:e}", p.x1));
        put("x2", format!("{:e}", p.x2));
        put("sigma_x1", format!("{:e}", p.sigma_x1));
        put("sigma_x2", format!("{:e}", p.sigma_x2));
        put("p1", format!("{:e}", p.p1));
        put("p2", format!("{:e}", p.p2));
        put("model", self.model.to_string());
        put("initial_state", self.initial_state.to_string());
        put("t_start", format!("{:e}", self.t_start));
        put("t_end", format!("{:e}", self.t_end));
        put("steps", self.steps.to_string());
        put("grid_points", self.grid_points.to_string());
        put("rabi_period_seconds", format!("{:e}", p.rabi_period()));
        s
    }
}
