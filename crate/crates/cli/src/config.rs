//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use loop_modes::solver::{FreeParameter, ParameterSet};
use loop_modes::{ConstantsMode, Model};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// `lo:hi[:step]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: Option<f64>,
}

impl FromStr for RangeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Input(format!("range '{s}' must look like lo:hi or lo:hi:step"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let step = parts.get(2).map(|t| num(t)).transpose()?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::Input(format!("range '{s}' needs finite lo < hi")));
        }
        if let Some(st) = step {
            if !(st > 0.0 && st.is_finite()) {
                return Err(CliError::Input(format!("range '{s}' needs a positive step")));
            }
        }
        Ok(RangeSpec { lo, hi, step })
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)?;
        if let Some(step) = self.step {
            write!(f, ":{step}")?;
        }
        Ok(())
    }
}

impl RangeSpec {
    /// `lo, lo + step, …` up to `hi` (included when the grid lands on it).
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let step = self.step.ok_or_else(|| CliError::Input(format!("range '{self}' needs a step")))?;
        let n = ((self.hi - self.lo) / step + 1e-9).floor() as usize;
        if n > 10_000_000 {
            return Err(CliError::Input(format!("range '{self}' has too many points")));
        }
        Ok((0..=n).map(|i| self.lo + step * i as f64).collect())
    }

    /// `n` points spaced evenly in log between `lo` and `hi`.
    pub fn log_grid(&self, n: usize) -> Result<Vec<f64>, CliError> {
        if !(self.lo > 0.0) || n < 2 {
            return Err(CliError::Input("log spacing needs lo > 0 and at least 2 points".into()));
        }
        let (a, b) = (self.lo.ln(), self.hi.ln());
        Ok((0..n)
            .map(|i| {
                if i == 0 {
                    self.lo
                } else if i + 1 == n {
                    self.hi
                } else {
                    (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                }
            })
            .collect())
    }
}

/// Every setting a subcommand may need. Angles are in degrees.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barrier_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_barrier_length: Option<f64>,
    /// deg
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<FreeParameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b_list: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($opt:ident),*; $($vec:ident),*) => {
        $( if $src.$opt.is_some() { $dst.$opt = $src.$opt.clone(); } )*
        $( if !$src.$vec.is_empty() { $dst.$vec = $src.$vec.clone(); } )*
    };
}

impl RunConfig {
    /// Read a config file. A previous JSON result, whose `config` member
    /// echoes the settings that produced it, is accepted as well.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let value = match value.get("config") {
            Some(inner) if inner.is_object() => inner.clone(),
            _ => value,
        };
        serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    /// Settings present in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: &RunConfig) -> Self {
        let dst = &mut self;
        overlay!(dst, flags;
            model, energy, potential, barrier_length, pre_barrier_length, free, range,
            log_points, samples, root_index, constants, format;
            theta, b_list);
        self
    }

    pub fn constants(&self) -> ConstantsMode {
        self.constants.unwrap_or(ConstantsMode::PaperEffective)
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }

    pub fn model(&self) -> Result<Model, CliError> {
        self.model.ok_or_else(|| CliError::Input("a model (square or triangular) is required".into()))
    }

    pub fn range(&self) -> Result<Option<RangeSpec>, CliError> {
        self.range.as_deref().map(str::parse).transpose()
    }

    pub fn single_theta(&self) -> Result<Option<f64>, CliError> {
        match self.theta.as_slice() {
            [] => Ok(None),
            [t] => Ok(Some(*t)),
            _ => Err(CliError::Input("exactly one --theta is allowed here".into())),
        }
    }

    /// The fixed parameters, with Θ converted to radians.
    pub fn parameters(&self) -> Result<ParameterSet, CliError> {
        Ok(ParameterSet {
            energy: self.energy,
            potential: self.potential,
            barrier_length: self.barrier_length,
            theta: self.single_theta()?.map(f64::to_radians),
            pre_barrier_length: self.pre_barrier_length,
        })
    }

    pub fn require(&self, value: Option<f64>, flag: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::Input(format!("--{flag} is required")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        let r: RangeSpec = "-360:0".parse().unwrap();
        assert_eq!((r.lo, r.hi, r.step), (-360.0, 0.0, None));
        let r: RangeSpec = "10:360:10".parse().unwrap();
        assert_eq!(r.grid().unwrap().len(), 36);
        assert_eq!(*r.grid().unwrap().last().unwrap(), 360.0);
        assert!("1".parse::<RangeSpec>().is_err());
        assert!("2:1".parse::<RangeSpec>().is_err());
        assert!("0:1:0".parse::<RangeSpec>().is_err());
        assert!("0:1:x".parse::<RangeSpec>().is_err());
    }

    #[test]
    fn log_grid_hits_endpoints() {
        let r: RangeSpec = "1000:50000".parse().unwrap();
        let g = r.log_grid(5).unwrap();
        assert_eq!((g[0], g[4]), (1000.0, 50000.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig { energy: Some(0.9), potential: Some(1.0), theta: vec![10.0], ..Default::default() };
        let flags = RunConfig { energy: Some(0.95), ..Default::default() };
        let merged = file.overlay(&flags);
        assert_eq!((merged.energy, merged.potential, merged.theta.clone()), (Some(0.95), Some(1.0), vec![10.0]));
    }

    #[test]
    fn json_round_trip() {
        let cfg = RunConfig {
            model: Some(Model::Square),
            energy: Some(0.95),
            free: Some(FreeParameter::Theta),
            range: Some("-360:0".into()),
            constants: Some(ConstantsMode::PaperEffective),
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        assert!(text.contains("\"constants\":\"paper\""));
    }
}
