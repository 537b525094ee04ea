//! JSON scan configuration.
//!
//! A config describes either one transition (`preset` and/or `params`, plus
//! `weight`) or a weighted sum of several (`components`), a `B0` grid, an
//! optional detuning average and which signal columns to fill. The schema is
//! documented in `docs/config-schema.md`.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::presets;
use crate::angular::{AngularState, Polarization};
use crate::doppler::{DetuningGrid, Weighting};
use crate::liouvillian::SystemParams;
use crate::parametric::linear_grid;

/// Parameter overrides; every field is optional.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub fg: Option<f64>,
    pub fe: Option<f64>,
    pub gg: Option<f64>,
    pub ge: Option<f64>,
    pub rabi: Option<f64>,
    pub detuning: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_coll: Option<f64>,
    pub branching: Option<f64>,
    /// Modulation amplitude; defaults to `0.1 γ`.
    pub b1: Option<f64>,
    pub mod_freq: Option<f64>,
    pub polarization: Option<PolarizationName>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PolarizationName {
    X,
    Z,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub preset: Option<String>,
    pub params: Option<ParamOverrides>,
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DopplerConfig {
    #[serde(default = "enabled")]
    pub enabled: bool,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
    /// Standard deviation of a Gaussian weight; uniform when absent.
    pub gaussian_sigma: Option<f64>,
}

fn enabled() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Static,
    Inphase,
    Quadrature,
}

/// The raw file contents.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub preset: Option<String>,
    pub params: Option<ParamOverrides>,
    pub weight: Option<f64>,
    pub components: Option<Vec<Component>>,
    pub scan: ScanAxis,
    pub doppler: Option<DopplerConfig>,
    pub outputs: Option<Vec<Column>>,
    pub output: Option<PathBuf>,
}

/// A config problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Which CSV columns carry data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Columns {
    pub static_signal: bool,
    pub inphase: bool,
    pub quadrature: bool,
}

impl Columns {
    pub const ALL: Columns = Columns {
        static_signal: true,
        inphase: true,
        quadrature: true,
    };
}

/// A validated scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedScan {
    /// `(parameters, weight)` per transition.
    pub components: Vec<(SystemParams, f64)>,
    pub grid: Vec<f64>,
    pub doppler: Option<DetuningGrid>,
    pub columns: Columns,
    pub output: Option<PathBuf>,
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            let field = match e.classify() {
                serde_json::error::Category::Syntax | serde_json::error::Category::Eof => "<syntax>",
                _ => "<schema>",
            };
            ConfigError::new(field, e.to_string())
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedScan, ConfigError> {
        let components = match &self.components {
            Some(list) => {
                if self.preset.is_some() || self.params.is_some() || self.weight.is_some() {
                    return Err(ConfigError::new(
                        "components",
                        "use either `components` or top-level `preset`/`params`/`weight`, not both",
                    ));
                }
                if list.is_empty() {
                    return Err(ConfigError::new("components", "must not be empty"));
                }
                list.iter()
                    .enumerate()
                    .map(|(i, c)| resolve_component(c, &format!("components[{i}].")))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => {
                let single = Component {
                    preset: self.preset.clone(),
                    params: self.params.clone(),
                    weight: self.weight,
                };
                vec![resolve_component(&single, "")?]
            }
        };

        let ScanAxis { min, max, count } = self.scan;
        if !(min.is_finite() && max.is_finite()) {
            return Err(ConfigError::new("scan.min", "scan bounds must be finite"));
        }
        if min >= max {
            return Err(ConfigError::new("scan.max", format!("max ({max}) must exceed min ({min})")));
        }
        if count < 2 {
            return Err(ConfigError::new("scan.count", format!("must be >= 2, got {count}")));
        }

        let doppler = match &self.doppler {
            Some(d) if d.enabled => Some(doppler_grid(d)?),
            _ => None,
        };

        let columns = match &self.outputs {
            None => Columns::ALL,
            Some(list) => {
                if list.is_empty() {
                    return Err(ConfigError::new("outputs", "select at least one column"));
                }
                Columns {
                    static_signal: list.contains(&Column::Static),
                    inphase: list.contains(&Column::Inphase),
                    quadrature: list.contains(&Column::Quadrature),
                }
            }
        };

        Ok(ResolvedScan {
            components,
            grid: linear_grid(min, max, count),
            doppler,
            columns,
            output: self.output.clone(),
        })
    }
}

/// Detuning grid for a `doppler` block, filling gaps from the defaults.
pub fn doppler_grid(d: &DopplerConfig) -> Result<DetuningGrid, ConfigError> {
    let default = DetuningGrid::default();
    let grid = DetuningGrid {
        min: d.min.unwrap_or(default.min),
        max: d.max.unwrap_or(default.max),
        points: d.points.unwrap_or(default.points),
        weighting: match d.gaussian_sigma {
            Some(sigma) => Weighting::Gaussian { sigma },
            None => Weighting::Uniform,
        },
    };
    grid.validate().map_err(|e| {
        let field = if e.to_string().contains("points") {
            "doppler.points"
        } else if e.to_string().contains("gaussian") {
            "doppler.gaussian_sigma"
        } else {
            "doppler.min"
        };
        ConfigError::new(field, e.to_string())
    })?;
    Ok(grid)
}

fn resolve_component(c: &Component, prefix: &str) -> Result<(SystemParams, f64), ConfigError> {
    let field = |name: &str| format!("{prefix}{name}");
    let base = match &c.preset {
        Some(name) => Some(presets::find(name).ok_or_else(|| {
            let known: Vec<_> = presets::all().iter().map(|p| p.name).collect();
            ConfigError::new(field("preset"), format!("unknown preset {name:?}; known: {}", known.join(", ")))
        })?),
        None => None,
    };
    let o = c.params.clone().unwrap_or_default();
    if base.is_none() && c.params.is_none() {
        return Err(ConfigError::new(field("preset"), "give a `preset` or explicit `params`"));
    }

    let pick = |name: &str, v: Option<f64>, from_preset: Option<f64>| -> Result<f64, ConfigError> {
        v.or(from_preset)
            .ok_or_else(|| ConfigError::new(field(&format!("params.{name}")), "required without a preset"))
    };
    let fg = pick("fg", o.fg, base.map(|b| b.fg))?;
    let fe = pick("fe", o.fe, base.map(|b| b.fe))?;
    let gg = pick("gg", o.gg, base.map(|b| b.gg))?;
    let ge = pick("ge", o.ge, base.map(|b| b.ge))?;
    let state = AngularState::new(fg, fe, gg, ge)
        .map_err(|e| ConfigError::new(field("params.fg"), e.to_string()))?;

    let mut p = match base {
        Some(b) => b
            .params()
            .map_err(|e| ConfigError::new(field("preset"), e.to_string()))?,
        None => SystemParams::new(state),
    };
    p.state = state;
    p.rabi = o.rabi.unwrap_or(p.rabi);
    p.detuning = o.detuning.unwrap_or(p.detuning);
    p.gamma = o.gamma.unwrap_or(p.gamma);
    p.gamma_coll = o.gamma_coll.unwrap_or(p.gamma_coll);
    p.branching = o.branching.unwrap_or(p.branching);
    p.mod_freq = o.mod_freq.unwrap_or(p.mod_freq);
    p.b1 = o.b1.unwrap_or(0.1 * p.gamma);
    if let Some(pol) = o.polarization {
        p.polarization = match pol {
            PolarizationName::X => Polarization::linear_x(),
            PolarizationName::Z => Polarization::linear_z(),
        };
    }

    if let Err(e) = p.validate() {
        let msg = e.to_string();
        let name = ["gamma_coll", "rabi", "detuning", "gamma", "branching", "b1", "mod_freq"]
            .into_iter()
            .find(|n| msg.contains(&format!("{n} =")))
            .unwrap_or("params");
        return Err(ConfigError::new(field(&format!("params.{name}")), msg));
    }
    if !(p.gamma > 0.0) {
        return Err(ConfigError::new(
            field("params.gamma"),
            format!("must be > 0 for a steady state, got {}", p.gamma),
        ));
    }

    let weight = c.weight.or(base.map(|b| b.weight)).unwrap_or(1.0);
    if !(weight.is_finite() && weight > 0.0) {
        return Err(ConfigError::new(field("weight"), format!("must be > 0, got {weight}")));
    }
    Ok((p, weight))
}
