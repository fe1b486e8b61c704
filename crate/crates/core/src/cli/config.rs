use std::fmt;
use std::str::FromStr;

use crate::device::{DeviceParams, WriteScheme};
use crate::fuzzy::DeviceConfig;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum BackendChoice {
    #[default]
    Ideal,
    Device,
}

impl FromStr for BackendChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ideal" => Ok(BackendChoice::Ideal),
            "device" => Ok(BackendChoice::Device),
            _ => Err(format!("expected `ideal` or `device`, got `{s}`")),
        }
    }
}

impl fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendChoice::Ideal => "ideal",
            BackendChoice::Device => "device",
        })
    }
}

/// Numeric settings shared by all commands.
///
/// Built from defaults, then a `key = value` config file, then command-line
/// flags, each layer overriding the previous one.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub exponent: f64,
    pub grid: usize,
    pub sigma: f64,
    pub noise_mean: f64,
    pub noise_variance: f64,
    pub seed: u64,
    pub backend: BackendChoice,
    /// Programming tolerance as a fraction of `w_max`.
    pub tolerance: f64,
    pub resolution: usize,
    pub samples: usize,
    pub device: DeviceParams,
    pub v_read: f64,
    pub max_pulses: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            exponent: 2.0,
            grid: 16,
            sigma: 1.0,
            noise_mean: 0.0,
            noise_variance: 0.0,
            seed: 0,
            backend: BackendChoice::Ideal,
            tolerance: 0.005,
            resolution: 64,
            samples: 1000,
            device: DeviceParams::default(),
            v_read: 0.1,
            max_pulses: WriteScheme::default().max_pulses,
        }
    }
}

pub const CONFIG_KEYS: &[&str] = &[
    "exponent",
    "grid",
    "sigma",
    "noise_mean",
    "noise_variance",
    "seed",
    "backend",
    "tolerance",
    "resolution",
    "samples",
    "r_on",
    "r_off",
    "k_drift",
    "v_read",
    "max_pulses",
];

fn value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Config(format!("line {line}: bad value for `{key}`: {e}")))
}

impl RunConfig {
    /// Applies `key = value` lines on top of `self`. Blank lines and `#` comments are ignored.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, raw) = (key.trim(), raw.trim());
            match key {
                "exponent" => self.exponent = value(key, raw, line_no)?,
                "grid" => self.grid = value(key, raw, line_no)?,
                "sigma" => self.sigma = value(key, raw, line_no)?,
                "noise_mean" => self.noise_mean = value(key, raw, line_no)?,
                "noise_variance" => self.noise_variance = value(key, raw, line_no)?,
                "seed" => self.seed = value(key, raw, line_no)?,
                "backend" => self.backend = value(key, raw, line_no)?,
                "tolerance" => self.tolerance = value(key, raw, line_no)?,
                "resolution" => self.resolution = value(key, raw, line_no)?,
                "samples" => self.samples = value(key, raw, line_no)?,
                "r_on" => self.device.r_on = value(key, raw, line_no)?,
                "r_off" => self.device.r_off = value(key, raw, line_no)?,
                "k_drift" => self.device.k_drift = value(key, raw, line_no)?,
                "v_read" => self.v_read = value(key, raw, line_no)?,
                "max_pulses" => self.max_pulses = value(key, raw, line_no)?,
                other => {
                    return Err(CliError::Config(format!(
                        "line {line_no}: unknown key `{other}` (known: {})",
                        CONFIG_KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Config(what.to_string()));
        if !(self.exponent.is_finite() && self.exponent >= 1.0) {
            return bad(&format!("exponent must be finite and >= 1, got {}", self.exponent));
        }
        if self.grid < 2 {
            return bad(&format!("grid must be >= 2, got {}", self.grid));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(&format!("sigma must be > 0, got {}", self.sigma));
        }
        if !(self.noise_mean.is_finite() && self.noise_variance.is_finite() && self.noise_variance >= 0.0) {
            return bad("noise mean must be finite and noise variance >= 0");
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0 && self.tolerance <= 1.0) {
            return bad(&format!("tolerance must be in (0, 1], got {}", self.tolerance));
        }
        if self.resolution < 2 {
            return bad(&format!("resolution must be >= 2, got {}", self.resolution));
        }
        if self.samples == 0 {
            return bad("samples must be >= 1");
        }
        if !(self.v_read.is_finite() && self.v_read > 0.0) {
            return bad(&format!("v_read must be > 0, got {}", self.v_read));
        }
        if self.max_pulses == 0 {
            return bad("max_pulses must be >= 1");
        }
        self.device.validate().map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn device_config(&self) -> DeviceConfig {
        DeviceConfig {
            params: self.device,
            scheme: WriteScheme {
                max_pulses: self.max_pulses,
                ..WriteScheme::default()
            },
            w_max: 1.0,
            v_read: self.v_read,
            tolerance: self.tolerance,
        }
    }
}
