//! Scenario configuration. Keys carry their units; presets supply defaults
//! that a TOML file may override section by section.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::caustic::ENDPOINT_TOLERANCE;
use crate::profiles::TRUNCATION_THRESHOLD;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    RemoteBessel,
    Oscillatory,
    Pulse,
    Custom,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::RemoteBessel => "remote-bessel",
            ScenarioKind::Oscillatory => "oscillatory",
            ScenarioKind::Pulse => "pulse",
            ScenarioKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "remote-bessel" => Ok(ScenarioKind::RemoteBessel),
            "oscillatory" => Ok(ScenarioKind::Oscillatory),
            "pulse" => Ok(ScenarioKind::Pulse),
            "custom" => Ok(ScenarioKind::Custom),
            other => Err(Error::config(format!("unknown scenario kind '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetProfile {
    SuperGaussian,
    Oscillatory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub k_per_m: f64,
    pub r0_m: f64,
    pub zd_m: f64,
    #[serde(rename = "E0_V_per_m")]
    pub e0_v_per_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    #[serde(rename = "W0_prime_m")]
    pub w0_prime_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub profile: TargetProfile,
    #[serde(rename = "WT_prime_m")]
    pub wt_prime_m: f64,
    /// Super-Gaussian order `n` (the oscillatory envelope is always order 8).
    pub order: u32,
    /// Modulation count `m` of the oscillatory target.
    pub modes: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub gamma_fs2_per_m: f64,
    #[serde(rename = "tau_T_fs")]
    pub tau_t_fs: f64,
    pub t_half_span_fs: f64,
    pub t_samples: usize,
    pub z_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub n_s: usize,
    pub n_omega: usize,
    pub ode_steps: usize,
    /// Allowed caustic endpoint miss relative to the target span.
    pub endpoint_tolerance: f64,
    pub gs_iterations: usize,
    /// Samples of the plan band across the target interval.
    pub target_samples: usize,
    pub truncation_threshold: f64,
    pub beta_half_width: bool,
    pub local_widths: usize,
    pub local_centers: usize,
    /// Radial samples of the transverse cut at `zd` (0 disables it).
    pub radial_samples: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            n_s: 4096,
            n_omega: 4096,
            ode_steps: 4096,
            endpoint_tolerance: ENDPOINT_TOLERANCE,
            gs_iterations: 100,
            target_samples: 128,
            truncation_threshold: TRUNCATION_THRESHOLD,
            beta_half_width: false,
            local_widths: 24,
            local_centers: 33,
            radial_samples: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: String,
    pub values: Vec<f64>,
}

pub const SWEEP_PARAMS: &[&str] = &[
    "WT_prime_m",
    "W0_prime_m",
    "k_per_m",
    "r0_m",
    "zd_m",
    "modes",
    "order",
    "gamma_fs2_per_m",
    "tau_T_fs",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub design: DesignSection,
    pub input: InputSection,
    pub target: TargetSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSection>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl ScenarioConfig {
    pub fn preset(kind: ScenarioKind) -> Option<Self> {
        let solver = SolverSection::default();
        match kind {
            ScenarioKind::RemoteBessel => Some(ScenarioConfig {
                kind,
                design: DesignSection { k_per_m: 9.5e6, r0_m: 0.3, zd_m: 1000.0, e0_v_per_m: 1.0 },
                input: InputSection { w0_prime_m: 0.07 },
                target: TargetSection { profile: TargetProfile::SuperGaussian, wt_prime_m: 100.0, order: 4, modes: 1 },
                pulse: None,
                solver,
                sweep: Some(SweepSection {
                    param: "WT_prime_m".into(),
                    values: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                }),
            }),
            ScenarioKind::Oscillatory => Some(ScenarioConfig {
                kind,
                design: DesignSection { k_per_m: 9.7e6, r0_m: 0.05, zd_m: 1.0, e0_v_per_m: 1.0 },
                input: InputSection { w0_prime_m: 0.005 },
                target: TargetSection { profile: TargetProfile::Oscillatory, wt_prime_m: 1e-3, order: 8, modes: 10 },
                pulse: None,
                solver: SolverSection { ode_steps: 16384, ..solver },
                sweep: Some(SweepSection { param: "modes".into(), values: vec![1.0, 5.0, 10.0, 15.0] }),
            }),
            ScenarioKind::Pulse => Some(ScenarioConfig {
                kind,
                design: DesignSection { k_per_m: 7.9e6, r0_m: 0.5, zd_m: 1000.0, e0_v_per_m: 1.0 },
                input: InputSection { w0_prime_m: 0.1 },
                target: TargetSection { profile: TargetProfile::SuperGaussian, wt_prime_m: 20.0, order: 8, modes: 1 },
                pulse: Some(PulseSection {
                    gamma_fs2_per_m: 20.0,
                    tau_t_fs: 50.0,
                    t_half_span_fs: 250.0,
                    t_samples: 201,
                    z_samples: 256,
                }),
                solver,
                sweep: None,
            }),
            ScenarioKind::Custom => None,
        }
    }

    /// Parse TOML: `kind` selects a preset whose values the file overrides.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = text.parse().map_err(|e| Error::config(format!("TOML syntax: {e}")))?;
        let kind = match user.get("kind") {
            Some(toml::Value::String(s)) => ScenarioKind::parse(s)?,
            Some(_) => return Err(Error::config("'kind' must be a string")),
            None => return Err(Error::config("missing 'kind'")),
        };
        let mut base = match Self::preset(kind) {
            Some(p) => toml::Table::try_from(&p).map_err(|e| Error::config(e.to_string()))?,
            None => toml::Table::new(),
        };
        merge(&mut base, user);
        let cfg: ScenarioConfig = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be finite and positive, got {v}")))
            }
        };
        pos("k_per_m", self.design.k_per_m)?;
        pos("r0_m", self.design.r0_m)?;
        pos("zd_m", self.design.zd_m)?;
        pos("E0_V_per_m", self.design.e0_v_per_m)?;
        pos("W0_prime_m", self.input.w0_prime_m)?;
        pos("WT_prime_m", self.target.wt_prime_m)?;
        if self.target.order == 0 {
            return Err(Error::config("order must be at least 1"));
        }
        if self.target.profile == TargetProfile::Oscillatory && self.target.modes == 0 {
            return Err(Error::config("modes must be at least 1"));
        }
        let s = &self.solver;
        if s.n_s < crate::grids::MIN_GRID_POINTS || s.n_omega < crate::grids::MIN_GRID_POINTS {
            return Err(Error::config("n_s and n_omega must be at least 16"));
        }
        if s.ode_steps < 2 || s.gs_iterations < 1 || s.target_samples < 8 {
            return Err(Error::config("ode_steps >= 2, gs_iterations >= 1 and target_samples >= 8 are required"));
        }
        if !(s.endpoint_tolerance > 0.0 && s.endpoint_tolerance < 1.0) {
            return Err(Error::config("endpoint_tolerance must lie in (0, 1)"));
        }
        if !(s.truncation_threshold > 0.0 && s.truncation_threshold < 1.0) {
            return Err(Error::config("truncation_threshold must lie in (0, 1)"));
        }
        if s.local_widths == 0 || s.local_centers == 0 {
            return Err(Error::config("local search grid must be nonempty"));
        }
        match (self.kind, &self.pulse) {
            (ScenarioKind::Pulse, None) => return Err(Error::config("pulse scenario needs a [pulse] section")),
            (_, Some(p)) => {
                pos("tau_T_fs", p.tau_t_fs)?;
                pos("t_half_span_fs", p.t_half_span_fs)?;
                if p.gamma_fs2_per_m == 0.0 || !p.gamma_fs2_per_m.is_finite() {
                    return Err(Error::config("gamma_fs2_per_m must be finite and nonzero"));
                }
                if p.t_samples < 3 || p.z_samples < 2 {
                    return Err(Error::config("pulse mesh needs t_samples >= 3 and z_samples >= 2"));
                }
            }
            _ => {}
        }
        if let Some(sw) = &self.sweep {
            validate_sweep(sw)?;
        }
        Ok(())
    }

    /// Copy with one sweep parameter replaced.
    pub fn with_param(&self, param: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let as_count = |v: f64| -> Result<u32> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(Error::config(format!("{param} must be a positive integer, got {v}")))
            }
        };
        match param {
            "WT_prime_m" => c.target.wt_prime_m = value,
            "W0_prime_m" => c.input.w0_prime_m = value,
            "k_per_m" => c.design.k_per_m = value,
            "r0_m" => c.design.r0_m = value,
            "zd_m" => c.design.zd_m = value,
            "modes" => c.target.modes = as_count(value)?,
            "order" => c.target.order = as_count(value)?,
            "gamma_fs2_per_m" | "tau_T_fs" => {
                let p = c.pulse.as_mut().ok_or_else(|| Error::config(format!("{param} needs a [pulse] section")))?;
                if param == "tau_T_fs" {
                    p.tau_t_fs = value;
                } else {
                    p.gamma_fs2_per_m = value;
                }
            }
            other => return Err(Error::config(format!("unknown sweep parameter '{other}'"))),
        }
        c.sweep = None;
        c.validate()?;
        Ok(c)
    }
}

pub fn validate_sweep(sw: &SweepSection) -> Result<()> {
    if !SWEEP_PARAMS.contains(&sw.param.as_str()) {
        return Err(Error::config(format!("unknown sweep parameter '{}'", sw.param)));
    }
    if sw.values.is_empty() {
        return Err(Error::config("sweep values are empty"));
    }
    if sw.values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::config("sweep values must be positive"));
    }
    if sw.values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("sweep values must be strictly increasing"));
    }
    Ok(())
}

fn merge(base: &mut toml::Table, user: toml::Table) {
    for (k, v) in user {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(u)) => merge(b, u),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}
