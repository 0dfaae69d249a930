//! Physical parameters of a star system and the on-disk config schema.
//!
//! The config file is plain `key = value` text (TOML syntax). Top-level keys
//! describe the spin system; optional `[charge]`, `[ergotropy]`,
//! `[correlations]`, `[asymptotic]` and `[qcbl]` tables hold protocol knobs.
//!
//! ```text
//! n_chargers = 36
//! gamma = 1.0
//! epsilon = 1e-5
//! coupling_j_hz = 2.0
//! coupling_j_bl_hz = 52.4
//! t1_battery_s = 115.4
//! t1_charger_s = 3.3
//!
//! [asymptotic]
//! delta_min_s = 0.5
//! delta_max_s = 30.0
//! delta_steps = 60
//! iterations = 20
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of charger spins N.
    pub n_chargers: usize,
    /// Charger-to-battery gyromagnetic ratio; may be negative.
    #[serde(default = "one")]
    pub gamma: f64,
    /// Battery purity factor ε.
    pub epsilon: f64,
    /// Battery-charger coupling J in Hz. Only needed to convert θ to seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_j_hz: Option<f64>,
    /// Battery-load coupling J_BL in Hz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_j_bl_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_battery_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_charger_s: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl SystemConfig {
    pub fn new(n_chargers: usize, gamma: f64, epsilon: f64) -> Result<Self> {
        let config = Self {
            n_chargers,
            gamma,
            epsilon,
            coupling_j_hz: None,
            coupling_j_bl_hz: None,
            t1_battery_s: None,
            t1_charger_s: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// Fully polarized battery and chargers (ε = 1, γ = 1).
    pub fn pure(n_chargers: usize) -> Result<Self> {
        Self::new(n_chargers, 1.0, 1.0)
    }

    pub fn with_coupling_hz(mut self, j: f64) -> Result<Self> {
        self.coupling_j_hz = Some(j);
        self.validate()?;
        Ok(self)
    }

    pub fn with_load_coupling_hz(mut self, j_bl: f64) -> Result<Self> {
        self.coupling_j_bl_hz = Some(j_bl);
        self.validate()?;
        Ok(self)
    }

    pub fn with_t1(mut self, battery_s: f64, charger_s: f64) -> Result<Self> {
        self.t1_battery_s = Some(battery_s);
        self.t1_charger_s = Some(charger_s);
        self.validate()?;
        Ok(self)
    }

    /// Charger purity factor γε.
    pub fn charger_purity(&self) -> f64 {
        self.gamma * self.epsilon
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_chargers == 0 {
            return Err(Error::Config("n_chargers must be at least 1".into()));
        }
        if !self.gamma.is_finite() || !self.epsilon.is_finite() {
            return Err(Error::Config("gamma and epsilon must be finite".into()));
        }
        if self.epsilon.abs() > 1.0 {
            return Err(Error::Config(format!(
                "|epsilon| = {} exceeds 1",
                self.epsilon.abs()
            )));
        }
        if self.charger_purity().abs() > 1.0 {
            return Err(Error::Config(format!(
                "charger purity |gamma*epsilon| = {} exceeds 1",
                self.charger_purity().abs()
            )));
        }
        let positive = [
            ("coupling_j_hz", self.coupling_j_hz),
            ("coupling_j_bl_hz", self.coupling_j_bl_hz),
            ("t1_battery_s", self.t1_battery_s),
            ("t1_charger_s", self.t1_charger_s),
        ];
        for (key, value) in positive {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Config(format!("{key} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn coupling_j(&self) -> Result<f64> {
        self.coupling_j_hz
            .ok_or_else(|| Error::Config("coupling_j_hz is not set".into()))
    }

    pub fn coupling_j_bl(&self) -> Result<f64> {
        self.coupling_j_bl_hz
            .ok_or_else(|| Error::Config("coupling_j_bl_hz is not set".into()))
    }

    /// `(T1 battery, T1 charger)`, both required.
    pub fn relaxation_times(&self) -> Result<(f64, f64)> {
        match (self.t1_battery_s, self.t1_charger_s) {
            (Some(b), Some(c)) => Ok((b, c)),
            _ => Err(Error::Config(
                "t1_battery_s and t1_charger_s are both required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeSection {
    /// θ samples per expected charging period 2π/√N.
    pub grid: Option<usize>,
    /// Charger counts aggregated by `--advantage`.
    pub advantage_ns: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErgotropySection {
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationsSection {
    pub grid: Option<usize>,
    /// Bloch-sphere directions in the coarse discord search.
    pub discord_directions: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticSection {
    pub delta_min_s: Option<f64>,
    pub delta_max_s: Option<f64>,
    pub delta_steps: Option<usize>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QcblSection {
    /// Samples of J_BL·τ′ over [0, 1].
    pub grid: Option<usize>,
    /// Longest storage time τ_s in seconds.
    pub storage_max_s: Option<f64>,
    pub storage_steps: Option<usize>,
}

/// Everything a config file may contain.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub system: SystemConfig,
    pub charge: ChargeSection,
    pub ergotropy: ErgotropySection,
    pub correlations: CorrelationsSection,
    pub asymptotic: AsymptoticSection,
    pub qcbl: QcblSection,
}

fn section<T: Default + for<'de> Deserialize<'de>>(
    table: &mut toml::Table,
    name: &str,
) -> Result<T> {
    match table.remove(name) {
        None => Ok(T::default()),
        Some(value) => value
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(format!("[{name}]: {}", e.message()))),
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let charge = section(&mut table, "charge")?;
        let ergotropy = section(&mut table, "ergotropy")?;
        let correlations = section(&mut table, "correlations")?;
        let asymptotic = section(&mut table, "asymptotic")?;
        let qcbl = section(&mut table, "qcbl")?;
        let system: SystemConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        system.validate()?;
        Ok(Self {
            system,
            charge,
            ergotropy,
            correlations,
            asymptotic,
            qcbl,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

impl std::str::FromStr for SystemConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(ConfigFile::parse(s)?.system)
    }
}
