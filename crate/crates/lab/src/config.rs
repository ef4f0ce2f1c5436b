//! Experiment configuration: defaults, flat key=value files, and CLI
//! overrides. Flags use exactly the same names as file keys, and flags win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qcorr::config::LogBase;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("config line {line} is not `key = value`: `{text}`")]
    Malformed { line: usize, text: String },

    #[error("unknown config key `{key}` on line {line}")]
    UnknownKey { key: String, line: usize },

    #[error("invalid value for `{key}` on line {line}: `{value}`")]
    InvalidValue { key: String, line: usize, value: String },

    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },
}

/// Which bundled experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    /// Parameter sweep of the constant-correlation family.
    Example1,
    /// Time evolution of the benchmark state with discrepancy scanning.
    Example2,
    /// Thermal-product evolution with heat balance and bound checks.
    Thermal,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Experiment::Example1 => write!(f, "example1"),
            Experiment::Example2 => write!(f, "example2"),
            Experiment::Thermal => write!(f, "thermal"),
        }
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub x_min: f64,
    pub x_max: f64,
    pub x_step: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
    pub beta: f64,
    pub log_base: LogBase,
    pub zero_eps: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
}

/// Optional overrides collected from a file or from CLI flags.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub x_step: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub beta: Option<f64>,
    pub log_base: Option<LogBase>,
    pub zero_eps: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    /// Per-experiment defaults; the time window differs between the
    /// benchmark run and the thermal run.
    pub fn defaults_for(experiment: Experiment) -> Self {
        let (t_min, t_max) = match experiment {
            Experiment::Thermal => (0.0, 2.0),
            _ => (4.0, 8.0),
        };
        Self {
            experiment,
            x_min: 0.27,
            x_max: 0.9,
            x_step: 0.001,
            t_min,
            t_max,
            dt: 4e-5,
            beta: 1.0,
            log_base: LogBase::Natural,
            zero_eps: 1e-9,
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }

    /// Defaults, then file settings, then CLI flags.
    pub fn resolve(
        experiment: Experiment,
        config_file: Option<&Path>,
        cli: &Overrides,
    ) -> Result<Self, ConfigError> {
        let mut config = Self::defaults_for(experiment);
        if let Some(path) = config_file {
            config.apply(&parse_file(path)?);
        }
        config.apply(cli);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, overrides: &Overrides) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(value) = overrides.$field.clone() {
                    self.$field = value;
                }
            };
        }
        take!(x_min);
        take!(x_max);
        take!(x_step);
        take!(t_min);
        take!(t_max);
        take!(dt);
        take!(beta);
        take!(log_base);
        take!(zero_eps);
        take!(output_dir);
        take!(seed);
    }

    fn validate(&self) -> Result<(), ConfigError> {
        // NaN fails both comparisons, so malformed values land here too.
        let x_ok = self.x_step > 0.0 && self.x_min < self.x_max;
        if !x_ok {
            return Err(ConfigError::InvalidGrid {
                reason: format!(
                    "need x_min < x_max and x_step > 0 (got {} .. {} step {})",
                    self.x_min, self.x_max, self.x_step
                ),
            });
        }
        let t_ok = self.dt > 0.0 && self.t_min < self.t_max;
        if !t_ok {
            return Err(ConfigError::InvalidGrid {
                reason: format!(
                    "need t_min < t_max and dt > 0 (got {} .. {} step {})",
                    self.t_min, self.t_max, self.dt
                ),
            });
        }
        Ok(())
    }
}

fn parse_file(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_text(&text)
}

/// Parse flat `key = value` text; `#` starts a comment, blank lines are
/// skipped.
pub fn parse_text(text: &str) -> Result<Overrides, ConfigError> {
    let mut overrides = Overrides::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed { line, text: raw.to_string() })?;
        let key = key.trim();
        let value = value.trim();

        fn parsed<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
            value.parse::<T>().map_err(|_| ConfigError::InvalidValue {
                key: key.to_string(),
                line,
                value: value.to_string(),
            })
        }

        match key {
            "x_min" => overrides.x_min = Some(parsed(key, value, line)?),
            "x_max" => overrides.x_max = Some(parsed(key, value, line)?),
            "x_step" => overrides.x_step = Some(parsed(key, value, line)?),
            "t_min" => overrides.t_min = Some(parsed(key, value, line)?),
            "t_max" => overrides.t_max = Some(parsed(key, value, line)?),
            "dt" => overrides.dt = Some(parsed(key, value, line)?),
            "beta" => overrides.beta = Some(parsed(key, value, line)?),
            "log_base" => overrides.log_base = Some(parsed(key, value, line)?),
            "zero_eps" => overrides.zero_eps = Some(parsed(key, value, line)?),
            "output_dir" => overrides.output_dir = Some(PathBuf::from(value)),
            "seed" => overrides.seed = Some(parsed(key, value, line)?),
            other => {
                return Err(ConfigError::UnknownKey { key: other.to_string(), line });
            }
        }
    }
    Ok(overrides)
}
